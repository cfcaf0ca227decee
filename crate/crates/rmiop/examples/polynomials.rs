//! Low-degree extensions, vanishing division (univariate and multivariate),
//! variable splitting, and restrictions to lines and planes.
//!
//! Run with: cargo run --release --example polynomials

use rmiop::field::{FieldId, Tower};
use rmiop::poly::{
    divide_by_vanishing_uni, lde_grid, multivariate_vanishing_division, sample_plane,
    split_variable, vanishing_poly, EvalTable, GridDomain, MultiPoly, UniPoly,
};
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let f = FieldId::F2x16;
    let mut rng = Seed::from_u64(7).stream("poly-demo");

    // LDE round trip over a GF(4)^2 grid
    let dom = GridDomain::subfield_power(&t, FieldId::F2x2, f, 2);
    let values: Vec<_> = (0..dom.size()).map(|_| t.sample(f, &mut rng)).collect();
    let table = EvalTable::new(dom.clone(), values).unwrap();
    let p = lde_grid(&t, &table).unwrap();
    println!(
        "LDE of a random 4x4 table: {} terms, individual degrees {:?}",
        p.terms.len(),
        p.individual_degrees()
    );
    assert_eq!(p.eval_on_grid(&t, &dom).values, table.values);
    println!("evaluate(lde(t)) == t on every grid point");

    // vanishing polynomials: V_{0,1} = x^2 + x, V_GF(4) = x^4 + x
    let zero_one = [t.zero(f), t.one(f)];
    println!(
        "V_{{0,1}} coefficients (low to high): {:?}",
        vanishing_poly(&t, &zero_one)
            .unwrap()
            .coeffs()
            .iter()
            .map(|c| c.to_hex())
            .collect::<Vec<_>>()
    );
    let gf4 = t.subfield_axis(FieldId::F2x2, f).unwrap();
    println!(
        "V_GF(4) coefficients: {:?}",
        vanishing_poly(&t, &gf4)
            .unwrap()
            .coeffs()
            .iter()
            .map(|c| c.to_hex())
            .collect::<Vec<_>>()
    );

    // dividing x^3 + x^2 by V_{0,1} gives x; dividing x fails loudly
    let mut coeffs = vec![t.zero(f); 4];
    coeffs[2] = t.one(f);
    coeffs[3] = t.one(f);
    let g = divide_by_vanishing_uni(&t, &UniPoly::new(f, coeffs), &zero_one).unwrap();
    println!("(x^3 + x^2) / (x^2 + x) = x: degree {:?}", g.degree());
    let err = divide_by_vanishing_uni(&t, &UniPoly::monomial(t.one(f), 1), &zero_one);
    println!("dividing x by V_{{0,1}} signals dishonest input: {err:?}");

    // multivariate division: x^2 = (x^2+x)·1 + x over A = B = {0,1}
    let sets = vec![zero_one.to_vec(), zero_one.to_vec()];
    let x2 = MultiPoly::monomial(t.one(f), 2, [2, 0, 0]);
    let (r, qs) = multivariate_vanishing_division(&t, &x2, &sets).unwrap();
    println!(
        "x^2 mod (V_A(x), V_B(y)): R has {} term(s), Q_1 has {}, Q_2 has {}",
        r.terms.len(),
        qs[0].terms.len(),
        qs[1].terms.len()
    );

    // splitting: x^5 with stride 2 becomes u^2 v under (u, v) = (x^2, x)
    let q = split_variable(&UniPoly::monomial(t.one(f), 5), 2).unwrap();
    println!("split(x^5, 2) exponents: {:?}", q.terms.keys().collect::<Vec<_>>());

    // a total-degree-2 trivariate restricted to a plane keeps degree <= 2
    let mut tri = MultiPoly::zero(f, 3);
    for e in [[2u16, 0, 0], [1, 1, 0], [0, 0, 2], [1, 0, 0]] {
        tri = tri.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
    }
    let plane = sample_plane(&t, FieldId::F2x4, f, &mut rng);
    let restricted = plane.restrict_poly(&t, &tri);
    println!(
        "plane restriction of a degree-2 trivariate: total degree {:?}",
        restricted.total_degree()
    );
}
