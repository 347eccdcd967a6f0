use clipcone::corpus;
use clipcone::descent::{descend, DescentOptions};
use clipcone::lattice::FiniteAction;

#[test]
fn every_valid_instance_descends_cleanly() {
    for inst in corpus::valid() {
        let r = descend(&inst.cone, &inst.action, &DescentOptions::default()).unwrap_or_else(|e| panic!("{}: {e}", inst.name));
        assert!(r.ok(), "{}: {:?}", inst.name, r.failures());
        assert_eq!(r.equality.disagreements, 0, "{}", inst.name);
        for (t, &i) in r.i_star.iter().enumerate() {
            let o = &r.root_orbits[i];
            assert!(r.taus[t].is_integral());
            assert!(o.q_epsilon.starts_with('-'), "{}", inst.name);
        }
        println!("{:<20} |G| = {:<3} d = {:?} I* = {:?} inside = {}", inst.name, r.group_order,
            r.orbits.iter().map(|o| o.d).collect::<Vec<_>>(), r.i_star, r.equality.inside);
    }
}

#[test]
fn identity_descent_reproduces_the_cone() {
    for inst in corpus::valid() {
        let id = FiniteAction::trivial(inst.rank());
        let r = descend(&inst.cone, &id, &DescentOptions::default()).unwrap();
        assert!(r.ok(), "{}", inst.name);
        assert!(r.basis.is_identity() || inst.cone.ambient.factors.len() > 1, "{}", inst.name);
        assert_eq!(r.i_star.len(), inst.cone.roots.len());
        for (tau, sigma) in r.taus.iter().zip(inst.cone.reflections()) {
            assert_eq!(tau.is_integral(), sigma.is_integral());
        }
    }
}
