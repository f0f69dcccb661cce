//! JSON family format.
//!
//! ```json
//! {"n": 4, "partitions": [{"id": "p", "block": "B", "side0": [0, 2]}]}
//! ```
//!
//! Side 1 is the complement of `side0`. Output is canonical: keys sorted,
//! `side0` ascending, two-space indentation, trailing newline.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::sets::{Block, GroundSet, PartitionFamily, PointSet};

pub fn family_to_value(family: &PartitionFamily) -> Value {
    let partitions: Vec<Value> = family
        .entries()
        .iter()
        .map(|e| {
            json!({
                "id": e.label,
                "block": e.block.as_str(),
                "side0": e.partition.side0().to_vec(),
            })
        })
        .collect();
    json!({ "n": family.n(), "partitions": partitions })
}

pub fn family_to_string(family: &PartitionFamily) -> String {
    let mut s = serde_json::to_string_pretty(&family_to_value(family)).expect("values serialize");
    s.push('\n');
    s
}

pub fn family_from_str(text: &str) -> Result<PartitionFamily> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
    family_from_value(&value)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(path, format!("missing key `{key}`")))
}

pub fn family_from_value(value: &Value) -> Result<PartitionFamily> {
    let root = value
        .as_object()
        .ok_or_else(|| Error::schema("$", "expected an object"))?;
    let n = field(root, "n", "$")?
        .as_u64()
        .ok_or_else(|| Error::schema("$.n", "expected a non-negative integer"))? as usize;
    let ground = GroundSet::new(n).map_err(|_| Error::schema("$.n", "must be at least 1"))?;
    let parts = field(root, "partitions", "$")?
        .as_array()
        .ok_or_else(|| Error::schema("$.partitions", "expected an array"))?;
    let mut family = PartitionFamily::new(ground);
    for (i, p) in parts.iter().enumerate() {
        let path = format!("$.partitions[{i}]");
        let obj = p
            .as_object()
            .ok_or_else(|| Error::schema(&path, "expected an object"))?;
        let id = field(obj, "id", &path)?
            .as_str()
            .ok_or_else(|| Error::schema(format!("{path}.id"), "expected a string"))?;
        let block_str = field(obj, "block", &path)?
            .as_str()
            .ok_or_else(|| Error::schema(format!("{path}.block"), "expected a string"))?;
        let block = Block::parse(block_str).ok_or_else(|| {
            Error::schema(
                format!("{path}.block"),
                format!("unknown block `{block_str}`, expected one of B, D, C, E, other"),
            )
        })?;
        let side0_val = field(obj, "side0", &path)?
            .as_array()
            .ok_or_else(|| Error::schema(format!("{path}.side0"), "expected an array"))?;
        let mut side0 = PointSet::empty(n);
        for (k, v) in side0_val.iter().enumerate() {
            let vpath = format!("{path}.side0[{k}]");
            let x = v
                .as_u64()
                .ok_or_else(|| Error::schema(&vpath, "expected a non-negative integer"))?;
            if x >= n as u64 {
                return Err(Error::schema(vpath, format!("point {x} outside 0..{n}")));
            }
            if side0.contains(x as usize) {
                return Err(Error::schema(vpath, format!("point {x} listed twice")));
            }
            side0.insert(x as usize);
        }
        family.push_side0(id, block, side0).map_err(|e| match e {
            Error::DuplicateLabel(l) => Error::schema(format!("{path}.id"), format!("duplicate id `{l}`")),
            other => other,
        })?;
    }
    Ok(family)
}
