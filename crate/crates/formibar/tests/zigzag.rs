mod common;

use formibar::fixtures::disband_merge_formigram;
use formibar::zigzag::{
    barcode_of_formigram, formigram_to_diagram, rank_oracle_barcode, zigzag_barcode_indices,
    ZZInterval,
};
use formibar::{Barcode, Rat, SubPartition, Timeline, Universe};
use proptest::prelude::*;

#[test]
fn reference_barcode() {
    let b = barcode_of_formigram(&disband_merge_formigram()).unwrap();
    assert_eq!(
        b,
        Barcode::parse_list("(-inf,inf) (2,10) (6,17) (15,17)").unwrap()
    );
}

#[test]
fn reference_diagram_shape() {
    let d = formigram_to_diagram(&disband_merge_formigram()).unwrap();
    assert_eq!(d.num_levels(), 11);
    assert_eq!(rank_oracle_barcode(&d).unwrap(), zigzag_barcode_indices(&d));
}

#[test]
fn constant_and_empty() {
    for m in 1..=6 {
        let u = Universe::new((0..m).map(|i| format!("q{i}")));
        let t = Timeline::constant(SubPartition::discrete(u));
        let d = formigram_to_diagram(&t).unwrap();
        assert_eq!(
            zigzag_barcode_indices(&d),
            vec![ZZInterval { lo: 0, hi: 0 }; m]
        );
        assert_eq!(barcode_of_formigram(&t).unwrap().len(), m);
    }
    let u = Universe::new(["a"]);
    let e = SubPartition::empty(u.clone());
    let one = SubPartition::single_block(u);
    let t = Timeline::new(vec![Rat::zero()], vec![one], vec![e.clone(), e]).unwrap();
    assert_eq!(
        barcode_of_formigram(&t).unwrap(),
        Barcode::parse_list("[0,0]").unwrap()
    );
}

#[test]
fn random_diagrams_match_oracle() {
    let mut rng = common::rng(11);
    for _ in 0..200 {
        let d = common::random_diagram(&mut rng, 24);
        assert_eq!(
            zigzag_barcode_indices(&d),
            rank_oracle_barcode(&d).unwrap(),
            "{d:?}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formigram_oracle_and_counts(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_formigram(&mut rng, 6, 8);
        let d = formigram_to_diagram(&t).unwrap();
        prop_assert_eq!(zigzag_barcode_indices(&d), rank_oracle_barcode(&d).unwrap());
        let b = barcode_of_formigram(&t).unwrap();
        for l in 0..t.num_levels() {
            let s = t.sample_time(l);
            prop_assert_eq!(b.count_containing(&s), t.value_at(&s).len());
        }
    }

    #[test]
    fn indexing_invariance(seed in any::<u64>(), extra in proptest::collection::vec(-20i64..60, 1..4)) {
        let mut rng = common::rng(seed);
        let t = common::random_formigram(&mut rng, 5, 6);
        let extra: Vec<Rat> = extra.into_iter().map(|k| Rat::new(2 * k + 1, 4)).collect();
        let r = t.refined(&extra);
        prop_assert_eq!(barcode_of_formigram(&t).unwrap(), barcode_of_formigram(&r).unwrap());
    }

    #[test]
    fn saturated_bars_are_open(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_formigram_with(&mut rng, 5, 6, true);
        for iv in barcode_of_formigram(&t).unwrap().intervals() {
            prop_assert!(!iv.left_closed && !iv.right_closed);
        }
    }
}
