mod common;

use proptest::prelude::*;

use maniplex::generators::{random_maniplex, torus_44};
use maniplex::graph::{are_isomorphic, is_isomorphism, ColouredGraph, Partition};
use maniplex::maniplex::{normal_form, ColouredPath};
use maniplex::polytopality::is_polytopal;

fn labels(len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, len)
}

fn relabel(g: &ColouredGraph, perm: &[usize]) -> ColouredGraph {
    let mut rows = vec![vec![0; g.flag_count()]; g.rank()];
    for (c, row) in rows.iter_mut().enumerate() {
        for v in 0..g.flag_count() {
            row[perm[v]] = perm[g.adj(c, v)];
        }
    }
    ColouredGraph::new(g.rank(), rows).unwrap()
}

proptest! {
    #[test]
    fn meet_laws((a, b, c) in (1usize..24).prop_flat_map(|n| (labels(n), labels(n), labels(n)))) {
        let (p, q, r) = (Partition::from_labels(&a), Partition::from_labels(&b), Partition::from_labels(&c));
        let pq = p.meet(&q).unwrap();
        prop_assert_eq!(&pq, &q.meet(&p).unwrap());
        prop_assert_eq!(pq.meet(&r).unwrap(), p.meet(&q.meet(&r).unwrap()).unwrap());
        prop_assert_eq!(p.meet(&p).unwrap(), p.clone());
        prop_assert!(pq.refines(&p) && pq.refines(&q));
        prop_assert_eq!(pq.first_split_pair(&p).is_none(), p.refines(&q));
        prop_assert!(Partition::discrete(a.len()).refines(&p));
        prop_assert!(p.refines(&Partition::single_block(a.len())));
    }

    #[test]
    fn relabelled_maniplex_is_isomorphic(seed in 0u64..200, shuffle in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let m = random_maniplex(3, seed, 48).unwrap();
        let mut perm: Vec<usize> = (0..m.flag_count()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle));
        let h = relabel(m.graph(), &perm);
        let phi = are_isomorphic(m.graph(), &h).unwrap().expect("isomorphic");
        prop_assert!(is_isomorphism(m.graph(), &h, &phi));
        let other = maniplex::Maniplex::new(h).unwrap();
        prop_assert_eq!(is_polytopal(&m).unwrap().polytopal, is_polytopal(&other).unwrap().polytopal);
    }

    #[test]
    fn normal_form_walks_to_the_same_flag(word in prop::collection::vec(0usize..3, 0..60), start in 0usize..32) {
        let m = torus_44(2, 2).unwrap();
        let nf = normal_form(&word);
        prop_assert_eq!(m.graph().walk(start, &nf), m.graph().walk(start, &word));
        prop_assert_eq!(normal_form(&nf), nf.clone());
        prop_assert!(nf.len() <= word.len() && nf.len() % 2 == word.len() % 2);
        prop_assert!(nf.windows(2).all(|w| w[0] != w[1] && w[0] <= w[1] + 1));
    }

    #[test]
    fn normalized_paths_keep_endpoints(seed in 0u64..100, word in prop::collection::vec(0usize..4, 0..30), pivot in 0usize..4) {
        let m = random_maniplex(4, seed, 128).unwrap();
        let colours: Vec<usize> = word.into_iter().filter(|&c| c != pivot).collect();
        let path = ColouredPath::new(0, colours);
        let segments = m.normalize_path(&path, &[pivot]).unwrap();
        prop_assert_eq!(segments.len(), 2);
        prop_assert_eq!(segments[1].start, segments[0].end(m.graph()));
        prop_assert_eq!(segments[1].end(m.graph()), path.end(m.graph()));
        prop_assert!(segments[0].colours.iter().all(|&c| c < pivot));
        prop_assert!(segments[1].colours.iter().all(|&c| c > pivot));
    }
}
