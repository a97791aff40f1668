use std::collections::BTreeMap;

use corkcalc::families::{build_c, build_cm};
use corkcalc::stein::{
    cm_front, cnm_front, identity_correspondence, stein_check, trefoil_front, Event, FrontSource, LegendrianFront, Mark,
    TwistTemplates,
};
use corkcalc::{Error, KirbyDatum, TwoHandle, Word};
use proptest::prelude::*;

#[test]
fn trefoil_reference_has_tb_one() {
    let f = trefoil_front().unwrap();
    assert_eq!(f.tb("k"), 1);
    assert_eq!(f.writhe("k"), 3);
}

#[test]
fn cm_fronts_pass_for_small_m() {
    for m in 1..=3 {
        let f = cm_front(m).unwrap();
        assert_eq!(f.tb("b0"), 1, "m = {m}");
        let d = build_cm(m).unwrap();
        let r = stein_check(&d, &f, &identity_correspondence(&d)).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn cnm_fronts_pass() {
    for n in 2..=4 {
        for m in 1..=3 {
            let f = cnm_front(n, m).unwrap();
            let d = build_c(n, m).unwrap();
            let r = stein_check(&d, &f, &identity_correspondence(&d)).unwrap();
            assert!(r.pass, "n = {n}, m = {m}: {r:?}");
            assert_eq!(r.handles.len(), n);
        }
    }
}

#[test]
fn twist_boxes_grow_with_m() {
    let small = cm_front(1).unwrap();
    let big = cm_front(4).unwrap();
    assert_eq!(big.events().len(), small.events().len() + 3 * 6);
    assert_eq!(big.tb("b0"), small.tb("b0"));
}

#[test]
fn parallel_twist_costs_four() {
    let t = TwistTemplates::load().unwrap();
    let text = "lcusp 0 k down\nlcusp 0 k up\ntwist 1 -1\ncross 1 +\nrcusp 0 k down\nrcusp 0 k up\n";
    // The two middle strands point the same way.
    let src = FrontSource::parse(text).unwrap();
    let base = FrontSource::parse(&text.replace("twist 1 -1\n", "")).unwrap();
    let with = src.instantiate(1, &t);
    let without = base.instantiate(1, &t);
    match (with, without) {
        (Ok(a), Ok(b)) => assert_eq!(a.tb("k") - b.tb("k"), -4),
        (a, b) => panic!("{a:?} {b:?}"),
    }
}

#[test]
fn wrong_framing_reports_deficit() {
    let mut d = KirbyDatum::empty();
    d.two_handles.push(TwoHandle::new("u", Word::empty(), 0));
    let f = FrontSource::parse("lcusp 0 u down\nrcusp 0 u up\n")
        .unwrap()
        .instantiate(1, &TwistTemplates::default())
        .unwrap();
    let r = stein_check(&d, &f, &identity_correspondence(&d)).unwrap();
    assert!(!r.pass);
    assert_eq!(r.handles[0].deficit, -2);
    assert!(matches!(stein_check(&d, &f, &BTreeMap::new()), Err(Error::CorrespondenceIncomplete(_))));
}

#[test]
fn split_unknot_does_not_change_verdicts() {
    let d = build_cm(2).unwrap();
    let f = cm_front(2).unwrap();
    let before = stein_check(&d, &f, &identity_correspondence(&d)).unwrap();
    let mut d2 = d.clone();
    d2.two_handles.push(TwoHandle::new("u", Word::empty(), -2));
    let unknot = FrontSource::parse("lcusp 0 u down\nrcusp 0 u up\n")
        .unwrap()
        .instantiate(1, &TwistTemplates::default())
        .unwrap();
    let f2 = f.stacked(&unknot).unwrap();
    let after = stein_check(&d2, &f2, &identity_correspondence(&d2)).unwrap();
    assert_eq!(after.handles[0], before.handles[0]);
    assert!(after.pass);
}

#[test]
fn passes_and_linking_are_checked() {
    let d = build_c(2, 1).unwrap();
    let f = cnm_front(2, 1).unwrap();
    let mut swapped = BTreeMap::new();
    swapped.insert("b0".to_string(), "a1".to_string());
    swapped.insert("a1".to_string(), "b0".to_string());
    let r = stein_check(&d, &f, &swapped).unwrap();
    assert!(!r.pass);
    assert!(!r.mismatches.is_empty());
}

/// Random closed fronts without 1-handles: the stack always holds as many
/// right- as left-pointing strands, so some adjacent pair can be closed.
fn random_front(ops: &[(u8, usize)]) -> LegendrianFront {
    let mut dirs: Vec<bool> = Vec::new(); // true = pointing right
    let mut events = Vec::new();
    let close = |dirs: &mut Vec<bool>, events: &mut Vec<Event>, hint: usize| -> bool {
        let n = dirs.len();
        if n < 2 {
            return false;
        }
        for k in 0..n - 1 {
            let p = (hint + k) % (n - 1);
            if dirs[p] != dirs[p + 1] {
                let mark = if dirs[p] { Mark::Down } else { Mark::Up };
                events.push(Event::RightCusp { pos: p, comp: String::new(), mark });
                dirs.drain(p..p + 2);
                return true;
            }
        }
        false
    };
    for &(kind, x) in ops {
        match kind % 3 {
            0 if dirs.len() < 8 => {
                let p = x % (dirs.len() + 1);
                let mark = if x % 2 == 0 { Mark::Down } else { Mark::Up };
                let (u, l) = if mark == Mark::Down { (false, true) } else { (true, false) };
                dirs.splice(p..p, [u, l]);
                events.push(Event::LeftCusp { pos: p, comp: String::new(), mark });
            }
            1 if dirs.len() >= 2 => {
                let p = x % (dirs.len() - 1);
                let sign = if dirs[p] == dirs[p + 1] { 1 } else { -1 };
                dirs.swap(p, p + 1);
                events.push(Event::Cross { pos: p, sign });
            }
            _ => {
                close(&mut dirs, &mut events, x);
            }
        }
    }
    while close(&mut dirs, &mut events, 0) {}
    assert!(dirs.is_empty());
    label_components(events)
}

/// Names every component after the arc union-find computed by replaying.
fn label_components(events: Vec<Event>) -> LegendrianFront {
    let mut parent: Vec<usize> = Vec::new();
    fn find(p: &mut Vec<usize>, mut a: usize) -> usize {
        while p[a] != a {
            a = p[a];
        }
        a
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut arcs_of_event = Vec::new();
    for e in &events {
        match e {
            Event::LeftCusp { pos, .. } => {
                parent.push(parent.len());
                let a = parent.len() - 1;
                stack.splice(*pos..*pos, [a, a]);
                arcs_of_event.push(a);
            }
            Event::RightCusp { pos, .. } => {
                let (a, b) = (stack[*pos], stack[pos + 1]);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
                stack.drain(*pos..pos + 2);
                arcs_of_event.push(a);
            }
            Event::Cross { pos, .. } => {
                stack.swap(*pos, pos + 1);
                arcs_of_event.push(usize::MAX);
            }
            Event::Twist { .. } => unreachable!(),
        }
    }
    let labelled = events
        .into_iter()
        .zip(arcs_of_event)
        .map(|(e, a)| match e {
            Event::LeftCusp { pos, mark, .. } => Event::LeftCusp { pos, comp: format!("k{}", find(&mut parent, a)), mark },
            Event::RightCusp { pos, mark, .. } => Event::RightCusp { pos, comp: format!("k{}", find(&mut parent, a)), mark },
            other => other,
        })
        .collect();
    LegendrianFront::new(Vec::new(), labelled).unwrap()
}

proptest! {
    #[test]
    fn tb_plus_rot_is_odd(ops in prop::collection::vec((0u8..3, 0usize..16), 0..40)) {
        let f = random_front(&ops);
        for c in f.components() {
            prop_assert_eq!((f.tb(&c) + f.rot(&c).unwrap()).rem_euclid(2), 1, "{}", c);
        }
    }

    #[test]
    fn reflection_keeps_tb_and_negates_rot(ops in prop::collection::vec((0u8..3, 0usize..16), 0..40)) {
        let f = random_front(&ops);
        let g = f.reflected().unwrap();
        let r = f.reversed().unwrap();
        for c in f.components() {
            prop_assert_eq!(g.tb(&c), f.tb(&c));
            prop_assert_eq!(g.rot(&c).unwrap(), -f.rot(&c).unwrap());
            prop_assert_eq!(r.tb(&c), f.tb(&c));
            prop_assert_eq!(r.rot(&c).unwrap(), -f.rot(&c).unwrap());
        }
    }

    #[test]
    fn linking_is_symmetric_and_integral(ops in prop::collection::vec((0u8..3, 0usize..16), 0..40)) {
        let f = random_front(&ops);
        let cs = f.components();
        for a in &cs {
            for b in &cs {
                if a != b {
                    prop_assert_eq!(f.linking(a, b).unwrap(), f.linking(b, a).unwrap());
                }
            }
        }
    }
}
