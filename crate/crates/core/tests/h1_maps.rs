use hurwitz::group::{GroupFile, InvariantSubset};
use hurwitz::hurwitz::{conjugate_tuple, orbit_members, ComponentMonoid};
use hurwitz::linalg::{Field, PrimeField, Rationals};
use hurwitz::presentation::{lst_induced_h1, rst_induced_h1, twist_induced_h1, Caps, ComponentH1};

fn subset(group: &str, sel: &str) -> InvariantSubset {
    let file = GroupFile::bundled(group).unwrap();
    file.select_q(&file.load().unwrap(), sel).unwrap()
}

fn component(q: &InvariantSubset, t: &[u8]) -> ComponentH1 {
    ComponentH1::new(q, t, Caps::default()).unwrap()
}

// rst(a) = lst(a) ∘ twist(a) on H1, for every component up to weight 5.
fn rst_factors_through_twist<F: Field>(f: &F, q: &InvariantSubset, top: usize) {
    let mut mon = ComponentMonoid::new(q.clone());
    mon.extend_to(top + 1).unwrap();
    for n in 1..=top {
        for x in 0..mon.count(n) {
            let bp = mon.canonical(n, x).to_vec();
            let src = component(q, &bp);
            let src_h = src.over(f);
            for a in 0..q.len() {
                let g = q.element(a);
                let twisted = component(q, &conjugate_tuple(q, g, &bp));
                let twisted_h = twisted.over(f);
                let mut tail = bp.clone();
                tail.push(a as u8);
                let tgt = component(q, &tail);
                let tgt_h = tgt.over(f);
                let rst = rst_induced_h1(f, a, 1, (&src, &src_h), (&tgt, &tgt_h)).unwrap();
                let tw = twist_induced_h1(f, q, g, (&src, &src_h), (&twisted, &twisted_h)).unwrap();
                let lst = lst_induced_h1(f, a, 1, (&twisted, &twisted_h), (&tgt, &tgt_h)).unwrap();
                assert_eq!(rst.matrix, lst.after(f, &tw).unwrap().matrix, "weight {n}, component {x}, a = {a}");
            }
        }
    }
}

#[test]
fn rst_is_lst_after_twist_s3() {
    rst_factors_through_twist(&Rationals, &subset("s3", "transpositions"), 5);
    rst_factors_through_twist(&PrimeField::new(3).unwrap(), &subset("s3", "transpositions"), 5);
}

#[test]
fn rst_is_lst_after_twist_d5() {
    rst_factors_through_twist(&PrimeField::new(2).unwrap(), &subset("d5", "involutions"), 3);
}

// lst(a)^2 equals two single steps composed.
#[test]
fn lst_powers_compose() {
    let q = subset("s3", "transpositions");
    let f = Rationals;
    let mut mon = ComponentMonoid::new(q.clone());
    mon.extend_to(7).unwrap();
    for n in 2..=5 {
        for x in 0..mon.count(n) {
            let bp = mon.canonical(n, x).to_vec();
            let src = component(&q, &bp);
            let src_h = src.over(&f);
            for a in 0..q.len() {
                let mut once = vec![a as u8];
                once.extend_from_slice(&bp);
                let mut twice = vec![a as u8];
                twice.extend_from_slice(&once);
                let mid = component(&q, &once);
                let mid_h = mid.over(&f);
                let tgt = component(&q, &twice);
                let tgt_h = tgt.over(&f);
                let step1 = lst_induced_h1(&f, a, 1, (&src, &src_h), (&mid, &mid_h)).unwrap();
                let step2 = lst_induced_h1(&f, a, 1, (&mid, &mid_h), (&tgt, &tgt_h)).unwrap();
                let both = lst_induced_h1(&f, a, 2, (&src, &src_h), (&tgt, &tgt_h)).unwrap();
                assert_eq!(both.matrix, step2.after(&f, &step1).unwrap().matrix);
            }
        }
    }
}

#[test]
fn h1_is_invariant_under_basepoint_and_conjugation() {
    let q = subset("s3", "transpositions");
    let mut mon = ComponentMonoid::new(q.clone());
    mon.extend_to(6).unwrap();
    for n in 2..=6 {
        for x in 0..mon.count(n) {
            let bp = mon.canonical(n, x).to_vec();
            let h = component(&q, &bp).integral().unwrap();
            let members = orbit_members(&q, &bp, 1 << 20).unwrap();
            let other = &members[members.len() / 2];
            assert_eq!(component(&q, other).integral().unwrap(), h);
            for g in 0..q.group().order() {
                assert_eq!(component(&q, &conjugate_tuple(&q, g, &bp)).integral().unwrap(), h);
            }
        }
    }
}

#[test]
fn identity_on_twist_by_the_identity() {
    let q = subset("d5", "involutions");
    let f = Rationals;
    let mut mon = ComponentMonoid::new(q.clone());
    mon.extend_to(4).unwrap();
    let e = q.group().identity();
    for x in 0..mon.count(4) {
        let c = component(&q, mon.canonical(4, x));
        let h = c.over(&f);
        let m = twist_induced_h1(&f, &q, e, (&c, &h), (&c, &h)).unwrap();
        assert!(m.is_iso(&f));
        assert_eq!(m.matrix, hurwitz::presentation::H1Map::identity(&f, h.dim()).matrix);
    }
}
