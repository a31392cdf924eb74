use std::sync::Arc;

use num_bigint::BigInt;

use super::{Cell, CellComplex, ChainMap, ComplexError};

fn shifted(id: &str) -> String {
    format!("{id}~")
}

/// Integral model of `Z/m` coefficients: one cell `σ` and one cell `σ~` of
/// one dimension more per cell of `k`, with `∂σ~ = m·σ - (∂σ)~`.
///
/// Homology in degree `n` is `H_n(k; Z/m)`; cohomology in degree `n+1` is
/// `H^n(k; Z/m)`. Cellular maps extend by `σ~ ↦ f(σ)~`.
pub fn coefficient_cone(k: &CellComplex, m: &BigInt) -> CellComplex {
    let mut cells = k.to_cells();
    for c in k.to_cells() {
        let mut boundary = vec![(c.id.clone(), m.clone())];
        boundary.extend(c.boundary.iter().map(|(f, v)| (shifted(f), -v)));
        cells.push(Cell { id: shifted(&c.id), dim: c.dim + 1, boundary });
    }
    CellComplex::new(cells).expect("cone ids are fresh")
}

/// `f ⊕ f~` between cones built by [`coefficient_cone`] with the same `m`.
pub fn cone_map(f: &ChainMap, source: Arc<CellComplex>, target: Arc<CellComplex>) -> Result<ChainMap, ComplexError> {
    let (n, t) = (f.source.len(), f.target.len());
    let mut images: Vec<Vec<(usize, BigInt)>> = (0..n).map(|c| f.image(c).to_vec()).collect();
    images.extend((0..n).map(|c| f.image(c).iter().map(|(x, v)| (x + t, v.clone())).collect()));
    // cells of a cone are stored originals first, then shifted copies
    debug_assert_eq!(source.len(), 2 * n);
    ChainMap::from_images(source, target, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::standard::*;
    use crate::complexes::Coefficients;

    #[test]
    fn cone_matches_universal_coefficients() {
        for k in [projective_plane(), torus(), circle(), point(), wedge_of_circles(2)] {
            for m in [2u32, 3, 4] {
                let mb = BigInt::from(m);
                let c = coefficient_cone(&k, &mb);
                let coeffs = Coefficients::Mod(mb.clone());
                for n in 0..3 {
                    assert_eq!(c.homology(n, &Coefficients::Integers), k.homology(n, &coeffs), "H_{n} mod {m}");
                    assert_eq!(c.cohomology(n + 1, &Coefficients::Integers), k.cohomology(n, &coeffs), "H^{n} mod {m}");
                }
            }
        }
    }

    #[test]
    fn degree_two_map_on_cones() {
        let s = Arc::new(circle());
        let f = circle_power_map(&s, 2);
        let two = BigInt::from(2);
        let c = Arc::new(coefficient_cone(&s, &two));
        let g = cone_map(&f, c.clone(), c.clone()).unwrap();
        // multiplication by 2 on H_1(S^1; Z/2) = Z/2 is zero
        assert!(g.induced_map(1).is_zero());
    }
}
