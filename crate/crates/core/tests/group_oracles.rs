use std::collections::HashMap;

use pdstring::group::{FreeAbelianGroup, GroupOracle, Letter, SearchBounds, Subgroup, SurfaceGroup, Word};
use proptest::prelude::*;

/// Dehn's algorithm on cyclic words: trivial iff it reduces to the empty word.
struct Dehn {
    relator: Vec<Letter>,
}

impl Dehn {
    fn new(genus: usize) -> Self {
        let mut relator = Vec::new();
        for i in 0..genus {
            relator.extend([
                Letter::new(2 * i, false),
                Letter::new(2 * i + 1, false),
                Letter::new(2 * i, true),
                Letter::new(2 * i + 1, true),
            ]);
        }
        Dehn { relator }
    }

    fn cyclic_reduce(w: &mut Vec<Letter>) {
        loop {
            let mut out: Vec<Letter> = Vec::new();
            for &l in w.iter() {
                if out.last() == Some(&l.inverse()) {
                    out.pop();
                } else {
                    out.push(l);
                }
            }
            while out.len() >= 2 && out[0] == out[out.len() - 1].inverse() {
                out.remove(0);
                out.pop();
            }
            let done = out.len() == w.len();
            *w = out;
            if done {
                return;
            }
        }
    }

    /// All cyclic shifts of the relator and of its inverse.
    fn relator_shifts(&self) -> Vec<Vec<Letter>> {
        let inv: Vec<Letter> = self.relator.iter().rev().map(|l| l.inverse()).collect();
        let n = self.relator.len();
        let mut out = Vec::new();
        for r in [&self.relator, &inv] {
            for s in 0..n {
                out.push((0..n).map(|k| r[(s + k) % n]).collect());
            }
        }
        out
    }

    fn is_trivial(&self, w: &[Letter]) -> bool {
        let n = self.relator.len();
        let shifts = self.relator_shifts();
        let mut cur = w.to_vec();
        loop {
            Self::cyclic_reduce(&mut cur);
            if cur.is_empty() {
                return true;
            }
            let len = cur.len();
            let mut replaced = false;
            'search: for rot in 0..len {
                let rotated: Vec<Letter> = (0..len).map(|k| cur[(rot + k) % len]).collect();
                for r in &shifts {
                    let common = rotated.iter().zip(r).take_while(|(a, b)| a == b).count();
                    if 2 * common > n {
                        let mut next: Vec<Letter> = r[common..].iter().rev().map(|l| l.inverse()).collect();
                        next.extend_from_slice(&rotated[common..]);
                        cur = next;
                        replaced = true;
                        break 'search;
                    }
                }
            }
            if !replaced {
                return false;
            }
        }
    }

    fn equal(&self, a: &Word, b: &Word) -> bool {
        self.is_trivial(a.concat(&b.inverse()).letters())
    }
}

fn sigma(genus: usize) -> SurfaceGroup {
    SurfaceGroup::new(genus, SearchBounds::default()).unwrap()
}

fn word_strategy(letters: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..letters, 0..=max_len)
        .prop_map(|v| Word::from_letters(v.into_iter().map(Letter::from_index).collect()))
}

/// All freely reduced words of length at most `radius`.
fn reduced_words(letters: u8, radius: usize) -> Vec<Word> {
    let mut all = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for x in 0..letters {
                let l = Letter::from_index(x);
                if w.letters().last() != Some(&l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[test]
fn shortlex_normal_forms_match_dehn_oracle_on_ball_of_radius_three() {
    let g = sigma(2);
    let dehn = Dehn::new(2);
    // Group every word of length ≤ 3 by its element; the ShortLex minimum of each group is the normal form.
    let mut classes: Vec<Vec<Word>> = Vec::new();
    let mut by_nf: HashMap<Word, usize> = HashMap::new();
    for w in reduced_words(8, 3) {
        let nf = g.normal_form(&w);
        assert!(dehn.equal(&w, &nf), "normal form changes the element of {w:?}");
        match by_nf.get(&nf) {
            Some(&i) => classes[i].push(w),
            None => {
                by_nf.insert(nf, classes.len());
                classes.push(vec![w]);
            }
        }
    }
    assert_eq!(classes.len(), 1 + 8 + 56 + 392);
    // Distinct normal forms are distinct elements.
    let reps: Vec<&Word> = by_nf.keys().collect();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if a.len() + b.len() <= 4 {
                assert!(!dehn.equal(a, b));
            }
        }
    }
    for (nf, &i) in &by_nf {
        let min = classes[i].iter().min().unwrap();
        assert_eq!(min, nf);
    }
}

#[test]
fn sphere_sizes_match_growth_series() {
    let count = |g: &SurfaceGroup, r: usize| {
        let ball = g.enumerate_ball(r);
        (0..=r).map(|k| ball.iter().filter(|w| w.len() == k).count()).collect::<Vec<_>>()
    };
    assert_eq!(count(&sigma(2), 5), vec![1, 8, 56, 392, 2736, 19096]);
    assert_eq!(count(&sigma(3), 4), vec![1, 12, 132, 1452, 15972]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surface_word_problem_agrees_with_dehn(w in word_strategy(8, 14)) {
        let g = sigma(2);
        prop_assert_eq!(g.is_identity(&w), Dehn::new(2).is_trivial(w.letters()));
    }

    #[test]
    fn surface_relator_conjugates_are_trivial(u in word_strategy(12, 8)) {
        let g = sigma(3);
        let r = g.relator();
        prop_assert!(g.is_identity(&u.concat(&r).concat(&u.inverse())));
    }

    #[test]
    fn surface_oracle_laws(a in word_strategy(8, 8), b in word_strategy(8, 8)) {
        let g = sigma(2);
        let na = g.normal_form(&a);
        prop_assert_eq!(g.normal_form(&na), na.clone());
        prop_assert!(g.is_identity(&g.multiply(&a, &g.invert(&a))));
        prop_assert_eq!(g.multiply(&a, &b), g.multiply(&na, &g.normal_form(&b)));
        prop_assert!(Dehn::new(2).equal(&a, &na));
    }

    #[test]
    fn surface_label_coherence(x in word_strategy(8, 5), w in word_strategy(8, 4)) {
        let g = sigma(2);
        let x = g.normal_form(&x);
        let y = g.conjugate(&w, &x);
        let lx = g.conjugacy_label(&x).unwrap();
        let ly = g.conjugacy_label(&y).unwrap();
        prop_assert_eq!(&lx.label, &ly.label);
        prop_assert_eq!(g.conjugate(&lx.conjugator, &x), lx.label.clone());
        let witness = g.are_conjugate(&x, &y).unwrap().unwrap();
        prop_assert_eq!(g.conjugate(&witness, &x), y);
    }

    #[test]
    fn surface_cyclic_coset_retraction(x in word_strategy(8, 6), r in word_strategy(8, 3), m in -3i64..=3) {
        let g = sigma(2);
        let r = g.normal_form(&r);
        prop_assume!(!r.is_empty());
        let (root, _) = g.root(&r).unwrap();
        let k = Subgroup::Cyclic(root.clone());
        let c = g.coset_canonical(&x, &k).unwrap();
        prop_assert_eq!(&c.rep, &g.multiply(&x, &c.k));
        prop_assert_eq!(g.subgroup_element(&k, &c.k_coords), c.k.clone());
        prop_assert_eq!(&g.coset_canonical(&c.rep, &k).unwrap().rep, &c.rep);
        let shifted = g.multiply(&x, &root.pow(m));
        prop_assert_eq!(&g.coset_canonical(&shifted, &k).unwrap().rep, &c.rep);
    }

    #[test]
    fn surface_double_coset_invariance(
        x in word_strategy(8, 5),
        a in -2i64..=2,
        b in -2i64..=2,
        pick in 0usize..4,
    ) {
        let g = sigma(2);
        let gens = ["a1", "b1", "a2", "a1*b2"];
        let r = g.alphabet().parse(gens[pick]).unwrap();
        let s = g.alphabet().parse(gens[(pick + 1) % 4]).unwrap();
        let (k, h) = (Subgroup::Cyclic(r.clone()), Subgroup::Cyclic(s.clone()));
        let d = g.double_coset(&x, &k, &h).unwrap();
        prop_assert_eq!(&d.rep, &g.normal_form(&d.k.concat(&x).concat(&d.h)));
        let moved = g.normal_form(&r.pow(a).concat(&x).concat(&s.pow(b)));
        prop_assert_eq!(&g.double_coset(&moved, &k, &h).unwrap().rep, &d.rep);
    }

    #[test]
    fn abelian_coset_and_double_coset_invariance(
        v in prop::collection::vec(-6i64..=6, 3),
        k in prop::collection::vec(-3i64..=3, 2),
    ) {
        let z3 = FreeAbelianGroup::new(3, SearchBounds::default());
        let x = z3.from_vector(&v);
        let sub = z3.lattice(&[z3.from_vector(&[1, 2, 0]), z3.from_vector(&[0, 3, 1])]);
        let other = z3.lattice(&[z3.from_vector(&[2, 0, 1])]);
        let c = z3.coset_canonical(&x, &sub).unwrap();
        prop_assert_eq!(&c.rep, &z3.multiply(&x, &c.k));
        let moved = z3.multiply(&x, &z3.subgroup_element(&sub, &k));
        prop_assert_eq!(&z3.coset_canonical(&moved, &sub).unwrap().rep, &c.rep);
        let d = z3.double_coset(&x, &sub, &other).unwrap();
        let moved = z3.multiply(&moved, &z3.subgroup_element(&other, &[k[0] - k[1]]));
        prop_assert_eq!(&z3.double_coset(&moved, &sub, &other).unwrap().rep, &d.rep);
    }
}

#[test]
fn surface_examples() {
    let g = sigma(2);
    let p = |t: &str| g.alphabet().parse(t).unwrap();
    let witness = g.are_conjugate(&p("a1*b1"), &p("b1*a1")).unwrap().unwrap();
    assert_eq!(g.conjugate(&witness, &p("a1*b1")), p("b1*a1"));
    assert_eq!(g.centralizer(&p("a1^2")).unwrap(), Subgroup::Cyclic(p("a1")));
    assert_eq!(g.coset_canonical(&p("a1^3*b2"), &Subgroup::Cyclic(p("a1"))).unwrap().rep, p("a1^3*b2"));
    assert_eq!(g.coset_canonical(&p("b2*a1^3"), &Subgroup::Cyclic(p("a1"))).unwrap().rep, p("b2"));
    assert_eq!(g.intersect(&Subgroup::Cyclic(p("a1")), &Subgroup::Cyclic(p("b2"))).unwrap(), Subgroup::Trivial);
    assert_eq!(g.coset_canonical(&p("a2*b1"), &Subgroup::Whole).unwrap().rep, Word::identity());
}

#[test]
fn surface_centralizer_of_square_is_exactly_the_cyclic_root() {
    let g = sigma(2);
    let a1 = g.alphabet().parse("a1").unwrap();
    let sq = a1.pow(2);
    for w in g.enumerate_ball(4) {
        if g.multiply(&w, &sq) == g.multiply(&sq, &w) {
            let m = g.subgroup_coordinates(&Subgroup::Cyclic(a1.clone()), &w).unwrap();
            assert!(m.is_some(), "{w:?} commutes with a1^2 but is not a power of a1");
        }
    }
}

#[test]
fn abelian_examples() {
    let z2 = FreeAbelianGroup::new(2, SearchBounds::default());
    let p = |t: &str| z2.alphabet().parse(t).unwrap();
    assert_eq!(z2.normal_form(&p("e1*e2*e1^-1")), p("e2"));
    assert!(z2.are_conjugate(&p("e1"), &p("e2")).unwrap().is_none());
    let k = z2.lattice(&[p("e1")]);
    assert_eq!(z2.coset_canonical(&p("e1^3*e2^5"), &k).unwrap().rep, p("e2^5"));
    let key = |t: &str| z2.double_coset(&p(t), &k, &k).unwrap().rep;
    assert_eq!(key("e2"), key("e1*e2"));
    assert_ne!(key("e2"), key("e2^2"));
    let z3 = FreeAbelianGroup::new(3, SearchBounds::default());
    let q = |t: &str| z3.alphabet().parse(t).unwrap();
    assert_eq!(z3.centralizer(&q("e1^2*e3^4")).unwrap(), Subgroup::Whole);
    let a = z3.lattice(&[q("e1"), q("e2")]);
    let b = z3.lattice(&[q("e2"), q("e3")]);
    assert_eq!(z3.intersect(&a, &b).unwrap(), Subgroup::Cyclic(q("e2")));
}

#[test]
fn cyclic_intersections_are_symmetric_and_contained() {
    let g = sigma(2);
    let words = ["a1", "a1^2", "a1^-3", "b2", "a1*b1", "b1*a1", "a1*b1*a1*b1"];
    for x in words {
        for y in words {
            let (r, s) = (g.alphabet().parse(x).unwrap(), g.alphabet().parse(y).unwrap());
            let (a, b) = (Subgroup::Cyclic(g.normal_form(&r)), Subgroup::Cyclic(g.normal_form(&s)));
            let ab = g.intersect(&a, &b).unwrap();
            let ba = g.intersect(&b, &a).unwrap();
            for gen in ab.basis() {
                assert!(g.subgroup_coordinates(&a, gen).unwrap().is_some());
                assert!(g.subgroup_coordinates(&b, gen).unwrap().is_some());
                assert!(g.subgroup_coordinates(&ba, gen).unwrap().is_some());
            }
            for gen in ba.basis() {
                assert!(g.subgroup_coordinates(&ab, gen).unwrap().is_some());
            }
            assert_eq!(ab.is_trivial(), ba.is_trivial());
        }
    }
}
