use chu_core::modring::*;

fn ring(p: u64, n: usize) -> RingSpec {
    RingSpec::new(p, n).unwrap()
}

#[test]
fn self_injective_over_small_rings() {
    for p in [2, 3] {
        for n in 2..=4 {
            assert_eq!(selfinjective_campaign(ring(p, n), 100, 6, 0), Ok(100));
        }
    }
}

#[test]
fn cogenerator_over_small_rings() {
    for p in [2, 3] {
        for n in 1..=4 {
            assert_eq!(cogenerator_campaign(ring(p, n), 100, 6, 0), Ok(100));
        }
    }
}

#[test]
fn embed_cyclic_formula_all_small() {
    for p in [2, 3, 5] {
        for n in 1..=4 {
            assert_eq!(check_embed_cyclic(ring(p, n)), Ok(n));
        }
    }
}

#[test]
fn self_dual_all_small() {
    for p in [2, 3, 5] {
        for n in 1..=6 {
            check_self_dual(ring(p, n)).unwrap();
        }
    }
}

#[test]
fn tensor_tables() {
    let t = tensor_table(ring(3, 3)).unwrap();
    assert_eq!(t, vec![vec![1, 1, 1], vec![1, 2, 2], vec![1, 2, 3]]);
    for n in 1..=4 {
        tensor_table(ring(2, n)).unwrap();
    }
}

#[test]
fn campaigns_are_seeded() {
    let a = campaign_rng(5, 1, ring(2, 3), 7);
    let b = campaign_rng(5, 1, ring(2, 3), 7);
    assert_eq!(a, b);
    assert_ne!(a, campaign_rng(6, 1, ring(2, 3), 7));
}
