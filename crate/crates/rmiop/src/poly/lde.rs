//! Low-degree extension by naive O(n²) interpolation; desk scale needs no FFT.

use crate::error::{structural, Result};
use crate::field::{FieldElem, Tower};
use crate::poly::{EvalTable, MultiPoly, UniPoly};

/// Newton interpolation through (xs[i], ys[i]); xs distinct. Returns dense
/// monomial coefficients of the unique polynomial of degree < n.
pub fn interpolate(t: &Tower, xs: &[FieldElem], ys: &[FieldElem]) -> Result<UniPoly> {
    assert_eq!(xs.len(), ys.len());
    if xs.is_empty() {
        return structural("interpolation needs at least one node");
    }
    let field = ys[0].field;
    let n = xs.len();
    // divided differences (characteristic 2: subtraction is addition)
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = t.add(dd[i], dd[i - 1]);
            let den = t.add(xs[i], xs[i - level]);
            if den.is_zero() {
                return structural("interpolation nodes must be distinct");
            }
            dd[i] = t.div(num, den)?;
        }
    }
    // expand Newton form: sum_i dd[i] * prod_{j<i} (x - xs[j])
    let mut coeffs = vec![t.zero(field); n];
    let mut basis = vec![t.zero(field); n];
    basis[0] = t.one(field);
    let mut basis_len = 1;
    for (i, &d) in dd.iter().enumerate() {
        for (k, &b) in basis.iter().enumerate().take(basis_len) {
            coeffs[k] = t.add(coeffs[k], t.mul(d, b));
        }
        if i + 1 < n {
            // basis *= (x + xs[i])
            let mut nb = vec![t.zero(field); basis_len + 1];
            for (k, &b) in basis.iter().enumerate().take(basis_len) {
                nb[k + 1] = t.add(nb[k + 1], b);
                nb[k] = t.add(nb[k], t.mul(b, xs[i]));
            }
            basis_len += 1;
            basis[..basis_len].copy_from_slice(&nb);
        }
    }
    Ok(UniPoly::new(field, coeffs))
}

/// LDE of a univariate table: the unique polynomial of degree ≤ |L|−1 agreeing
/// with the table on its axis.
pub fn lde_univariate(t: &Tower, table: &EvalTable) -> Result<UniPoly> {
    if table.domain.arity() != 1 {
        return structural("lde_univariate expects arity 1");
    }
    interpolate(t, &table.domain.axes[0].points, &table.values)
}

/// LDE of a grid table: the unique polynomial of individual degrees
/// ≤ (|L_1|−1, …, |L_m|−1) agreeing with the table on the grid.
pub fn lde_grid(t: &Tower, table: &EvalTable) -> Result<MultiPoly> {
    let m = table.domain.arity();
    let dims = table.domain.dims();
    let field = table.domain.field;
    // successively replace values along each axis by polynomial coefficients
    let mut data = table.values.clone();
    for axis_i in (0..m).rev() {
        // stride pattern: entries of one fiber along axis_i
        let stride: usize = dims[axis_i + 1..].iter().product();
        let block = stride * dims[axis_i];
        let n = dims[axis_i];
        let xs = &table.domain.axes[axis_i].points;
        let mut fiber = vec![t.zero(field); n];
        for base in 0..data.len() / block {
            for off in 0..stride {
                let start = base * block + off;
                for (j, slot) in fiber.iter_mut().enumerate() {
                    *slot = data[start + j * stride];
                }
                let poly = interpolate(t, xs, &fiber)?;
                for j in 0..n {
                    data[start + j * stride] = poly.coeff(j);
                }
            }
        }
    }
    // data[e1][e2][e3] now holds monomial coefficients
    let mut out = MultiPoly::zero(field, m);
    let dom = &table.domain;
    for (idx, multi) in dom.iter_indices().enumerate() {
        let c = data[idx];
        if !c.is_zero() {
            let mut exps = [0u16; 3];
            for (i, &e) in multi.iter().enumerate() {
                exps[i] = e as u16;
            }
            out.terms.insert(exps, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;
    use crate::poly::GridDomain;
    use crate::rng::Seed;

    fn t() -> Tower {
        Tower::default_tower()
    }

    #[test]
    fn constant_table_gives_constant_poly() {
        let t = t();
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, FieldId::F2x16, 2);
        let c = t.elem(FieldId::F2x16, 0x1234);
        let table = EvalTable::constant(&t, dom, c);
        let p = lde_grid(&t, &table).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.eval(&t, &[t.zero(FieldId::F2x16), t.one(FieldId::F2x16)]), c);
    }

    #[test]
    fn two_point_table_is_identity_poly() {
        // table over {0,1} with values (0,1) interpolates to x
        let t = t();
        let f = FieldId::F2x16;
        let xs = [t.zero(f), t.one(f)];
        let ys = [t.zero(f), t.one(f)];
        let p = interpolate(&t, &xs, &ys).unwrap();
        assert_eq!(p, UniPoly::monomial(t.one(f), 1));
    }

    #[test]
    fn lde_round_trip_random_bivariate() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, f, 2);
        let mut rng = Seed::from_u64(11).stream("lde_rt");
        for _ in 0..50 {
            let values: Vec<_> = (0..dom.size()).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom.clone(), values).unwrap();
            let p = lde_grid(&t, &table).unwrap();
            assert!(p.individual_degrees_at_most(&[3, 3]));
            let back = p.eval_on_grid(&t, &dom);
            assert_eq!(back.values, table.values);
        }
    }

    #[test]
    fn lde_round_trip_uni_and_trivariate() {
        let t = t();
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(23).stream("lde_rt13");
        let dom1 = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);
        for _ in 0..200 {
            let values: Vec<_> = (0..dom1.size()).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom1.clone(), values).unwrap();
            let p = lde_univariate(&t, &table).unwrap();
            assert!(p.degree_at_most(15));
            for (j, &x) in dom1.axes[0].points.iter().enumerate() {
                assert_eq!(p.eval(&t, x), table.values[j]);
            }
        }
        let dom3 = GridDomain::subfield_power(&t, FieldId::F2x2, f, 3);
        for _ in 0..100 {
            let values: Vec<_> = (0..dom3.size()).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom3.clone(), values).unwrap();
            let p = lde_grid(&t, &table).unwrap();
            assert!(p.individual_degrees_at_most(&[3, 3, 3]));
            assert_eq!(p.eval_on_grid(&t, &dom3).values, table.values);
        }
    }

    #[test]
    fn lde_is_unique_minimal_degree() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, f, 1);
        // a degree-2 polynomial's table must interpolate back to itself
        let p = UniPoly::new(f, vec![t.elem(f, 3), t.elem(f, 7), t.one(f)]);
        let table = EvalTable::new(
            dom.clone(),
            dom.axes[0].points.iter().map(|&x| p.eval(&t, x)).collect(),
        )
        .unwrap();
        let back = lde_univariate(&t, &table).unwrap();
        assert_eq!(back, p);
    }
}
