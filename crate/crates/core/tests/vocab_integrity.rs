mod support;

use std::time::Instant;

use proptest::prelude::*;
use schemalint_core::vocab::{VocabularyGraph, PINNED_SNAPSHOT, PINNED_SNAPSHOT_ID, THING};
use support::vocab;

#[test]
fn pinned_counts_and_closure() {
    let started = Instant::now();
    let fresh = VocabularyGraph::load(PINNED_SNAPSHOT, PINNED_SNAPSHOT_ID).unwrap();
    assert!(started.elapsed().as_secs_f64() < 5.0);
    // Counted independently from the snapshot file.
    assert_eq!(fresh.classes().len(), 857);
    assert_eq!(fresh.properties().len(), 1384);
    for class in fresh.classes().keys() {
        assert!(fresh.is_subclass_of(class, THING).unwrap(), "{class}");
    }
}

#[test]
fn pinned_facts() {
    let v = vocab();
    assert!(v.is_subclass_of("Hotel", "LodgingBusiness").unwrap());
    assert!(v.property_applies_to("startDate", "Event").unwrap());
    assert!(v.property_applies_to("name", "Hotel").unwrap());
    assert!(!v.property_applies_to("birthDate", "Event").unwrap());
    assert!(v.is_member_of("https://schema.org/InStock", "ItemAvailability"));
}

fn class_pair() -> impl Strategy<Value = (String, String)> {
    let classes: Vec<String> = vocab().classes().keys().cloned().collect();
    (0..classes.len()).prop_flat_map(move |i| {
        let class = classes[i].clone();
        let ancestors: Vec<String> = vocab().ancestors(&class).unwrap().iter().cloned().collect();
        (Just(class), proptest::sample::select(ancestors))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn domain_applicability_is_inherited((sub, sup) in class_pair(), p in 0usize..1384) {
        let v = vocab();
        let property = v.properties().keys().nth(p).unwrap();
        if v.property_applies_to(property, &sup).unwrap() {
            prop_assert!(v.property_applies_to(property, &sub).unwrap());
        }
    }

    #[test]
    fn range_conformance_is_inherited((sub, sup) in class_pair(), p in 0usize..1384) {
        let v = vocab();
        let property = v.properties().keys().nth(p).unwrap();
        if v.value_conforms_to_range(property, &sup).unwrap() {
            prop_assert!(v.value_conforms_to_range(property, &sub).unwrap());
        }
    }

    #[test]
    fn subclass_is_transitive((a, b) in class_pair(), c in 0usize..857) {
        let v = vocab();
        let c = v.classes().keys().nth(c).unwrap();
        if v.is_subclass_of(&b, c).unwrap() {
            prop_assert!(v.is_subclass_of(&a, c).unwrap());
        }
    }
}
