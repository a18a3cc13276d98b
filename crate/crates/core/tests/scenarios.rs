use qcluster_core::mutation::Limits;
use qcluster_core::polycheck::{certify_by_transport, enumerate, frozen_sufficient, Status};
use qcluster_core::scenarios::{build_an_chain, build_an_chain_in, build_sl2_standard, sl2_coproduct, AnChain};
use qcluster_core::{CoefficientClass, Seed};

#[test]
fn coproduct_images_are_polynomial_to_depth_six() {
    let g = build_sl2_standard().unwrap();
    let cp = sl2_coproduct(&g).unwrap();
    let graph = enumerate(&cp.amalgamation.seed, 6).unwrap();
    for (name, x) in cp.images.named() {
        let v = certify_by_transport(x, &graph, &Limits::default()).unwrap();
        assert!(v.status.passes(), "{name}: {:?}", v.status);
        assert_eq!(v.coefficient_status, Some(CoefficientClass::PositiveIntegralQ), "{name}");
    }
}

#[test]
fn chain_telescoping_sums_are_universally_polynomial() {
    for n in 3..=5 {
        let c: AnChain = build_an_chain(n).unwrap();
        let graph = enumerate(&c.seed, 12).unwrap();
        assert!(graph.closed, "n={n}");
        for x in [&c.telescoping, &c.full_monomial] {
            assert!(certify_by_transport(x, &graph, &Limits::default()).unwrap().status.passes(), "n={n}");
        }
    }
}

#[test]
fn chain_inside_the_standard_quiver() {
    // the F-path 0 -> 1 -> 2 of the standard quiver, with 3 as the ambient vertex
    let s = Seed::from_quiver(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[0, 2]).unwrap();
    let c = build_an_chain_in(&s, &[0, 1, 2]).unwrap();
    assert!(c.verify().unwrap());
    let fin = c.final_seed().unwrap();
    assert!(frozen_sufficient(&fin, &[1, 0, 0, 0]));
    let graph = enumerate(&s, 4).unwrap();
    let v = certify_by_transport(&c.telescoping, &graph, &Limits::default()).unwrap();
    assert_eq!(v.status, Status::UniversallyPolynomial);
}
