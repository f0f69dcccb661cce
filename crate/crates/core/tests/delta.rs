use std::collections::BTreeSet;

use resolab_core::delta::{find_compatible_pair, find_delta_system};
use resolab_core::rng::Rng;
use resolab_core::Condition;

fn is_sunflower(sets: &[&BTreeSet<u32>]) -> bool {
    let core: BTreeSet<u32> = sets[0].intersection(sets[1]).copied().collect();
    sets.iter().enumerate().all(|(i, a)| {
        sets[i + 1..]
            .iter()
            .all(|b| a.intersection(b).copied().collect::<BTreeSet<_>>() == core)
    })
}

/// Any three members forming a sunflower.
fn brute_has_three(sets: &[BTreeSet<u32>]) -> bool {
    let m = sets.len();
    (0..m).any(|i| (i + 1..m).any(|j| (j + 1..m).any(|k| is_sunflower(&[&sets[i], &sets[j], &sets[k]]))))
}

fn shuffle<T>(rng: &mut Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.below(i as u64 + 1) as usize);
    }
}

#[test]
fn planted_sunflowers_are_recovered() {
    for seed in 0..50 {
        let mut rng = Rng::new(seed);
        let k = 1 + rng.below(3) as u32;
        let mut sets = Vec::new();
        // three petals of size k on fresh elements around the core {7, 9}
        for p in 0..3u32 {
            let mut s: BTreeSet<u32> = [7, 9].into();
            s.extend((0..k).map(|x| 100 + 10 * p + x));
            sets.push(s);
        }
        let planted = sets.clone();
        for _ in 0..12 {
            let size = 1 + rng.below(5) as usize;
            let decoy: BTreeSet<u32> = (0..size).map(|_| rng.below(16) as u32).collect();
            sets.push(decoy);
        }
        shuffle(&mut rng, &mut sets);
        let f = find_delta_system(&sets, 3).unwrap().expect("planted sunflower exists");
        assert!(f.is_valid_for(&sets), "seed {seed}");
        assert!(f.petals.len() >= 3);
        // restricted to members containing the planted core, the planted petals come back
        let around: Vec<BTreeSet<u32>> = sets.iter().filter(|s| s.contains(&7) && s.contains(&9)).cloned().collect();
        let g = find_delta_system(&around, 3).unwrap().unwrap();
        assert!(g.is_valid_for(&around));
        let got: BTreeSet<_> = g.petals.iter().map(|&i| around[i].clone()).collect();
        assert_eq!(g.core, BTreeSet::from([7, 9]), "seed {seed}");
        assert!(planted.iter().all(|p| got.contains(p)), "seed {seed}");
    }
}

#[test]
fn finder_agrees_with_triple_scan() {
    for seed in 0..200 {
        let mut rng = Rng::new(seed + 500);
        let m = 3 + rng.below(8) as usize;
        let sets: Vec<BTreeSet<u32>> = (0..m)
            .map(|_| (0..1 + rng.below(4)).map(|_| rng.below(8) as u32).collect())
            .collect();
        let got = find_delta_system(&sets, 3).unwrap();
        assert_eq!(got.is_some(), brute_has_three(&sets), "seed {seed}: {sets:?}");
        if let Some(f) = got {
            assert!(f.is_valid_for(&sets));
        }
    }
}

#[test]
fn uniform_families_above_the_bound_contain_sunflowers() {
    let factorial = |k: usize| (1..=k).product::<usize>();
    for k in 1..=3usize {
        for r in 2..=3usize {
            let bound = factorial(k) * (r - 1).pow(k as u32);
            for seed in 0..10 {
                let mut rng = Rng::new(seed * 31 + k as u64);
                let mut fam: BTreeSet<BTreeSet<u32>> = BTreeSet::new();
                while fam.len() < bound + 1 {
                    let mut s = BTreeSet::new();
                    while s.len() < k {
                        s.insert(rng.below(12) as u32);
                    }
                    fam.insert(s);
                }
                let sets: Vec<_> = fam.into_iter().collect();
                let f = find_delta_system(&sets, r).unwrap();
                let f = f.unwrap_or_else(|| panic!("k {k} r {r} seed {seed}: none above the bound"));
                assert!(f.is_valid_for(&sets) && f.petals.len() >= r);
            }
        }
    }
}

#[test]
fn pigeonhole_forces_a_compatible_pair() {
    let mut rng = Rng::new(3);
    for s in 1..=4usize {
        let conds: Vec<Condition> = (0..(1 << s) + 1)
            .map(|_| Condition::from_pairs((0..s).map(|i| (format!("x{i}"), rng.below(2) as u8))).unwrap())
            .collect();
        let (i, j) = find_compatible_pair(&conds).expect("pigeonhole");
        assert!(i < j);
        assert_eq!(conds[i], conds[j]);
    }
}

#[test]
fn compatible_pair_is_lexicographically_first() {
    for seed in 0..100 {
        let mut rng = Rng::new(seed);
        let conds: Vec<Condition> = (0..6)
            .map(|_| {
                let mut pairs = Vec::new();
                for i in 0..4 {
                    if rng.below(2) == 0 {
                        pairs.push((format!("x{i}"), rng.below(2) as u8));
                    }
                }
                Condition::from_pairs(pairs).unwrap()
            })
            .collect();
        let scan = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).find(|&(i, j)| {
            conds[i].iter().all(|(l, v)| conds[j].get(l).is_none_or(|w| w == v))
        });
        assert_eq!(find_compatible_pair(&conds), scan);
    }
}
