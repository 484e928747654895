//! Reduced homology of E(2,G) against the coset poset of abelian subgroups.

use commtop::coset_poset::coset_poset_homology;
use commtop::group::catalog::{group, STANDARD_CORPUS};
use commtop::simplicial::{reduced_homology, Model};
use commtop::Budget;

fn compare(name: &str) {
    let g = group(name).unwrap();
    let budget = Budget::default();
    let e = reduced_homology(&g, Model::Homogeneous, 2, &budget).unwrap();
    let p = coset_poset_homology(&g, 2, &budget).unwrap();
    assert_eq!(e, p, "{name}");
}

#[test]
fn required_groups_agree() {
    for name in ["S3", "D8", "Q8", "Z6", "Z2xZ2"] {
        compare(name);
    }
}

#[test]
fn small_corpus_agrees() {
    for name in STANDARD_CORPUS {
        if group(name).unwrap().order() <= 16 {
            compare(name);
        }
    }
}

#[test]
fn nonabelian_groups_have_homology() {
    for name in STANDARD_CORPUS {
        let g = group(name).unwrap();
        if g.is_abelian() || g.order() > 16 {
            continue;
        }
        let h = coset_poset_homology(&g, 2, &Budget::default()).unwrap();
        assert!(h.iter().any(|x| !x.is_trivial()), "{name}");
    }
}
