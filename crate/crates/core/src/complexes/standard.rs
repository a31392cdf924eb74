//! Small named complexes and a random simplicial complex generator.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use super::{Cell, CellComplex, ChainMap, Subcomplex};

fn build(cells: Vec<Cell>) -> CellComplex {
    CellComplex::new_valid(cells).expect("standard complexes are valid")
}

pub fn point() -> CellComplex {
    build(vec![Cell::vertex("v")])
}

/// One vertex `v` and one edge `e` with `∂e = v − v`.
pub fn circle() -> CellComplex {
    build(vec![Cell::vertex("v"), Cell::new("e", 1, &[("v", 1), ("v", -1)])])
}

pub fn hollow_triangle() -> CellComplex {
    build(vec![
        Cell::vertex("a"),
        Cell::vertex("b"),
        Cell::vertex("c"),
        Cell::new("ab", 1, &[("b", 1), ("a", -1)]),
        Cell::new("bc", 1, &[("c", 1), ("b", -1)]),
        Cell::new("ca", 1, &[("a", 1), ("c", -1)]),
    ])
}

/// One vertex, two loops `a`, `b` and a square `aba⁻¹b⁻¹`.
pub fn torus() -> CellComplex {
    build(vec![
        Cell::vertex("v"),
        Cell::new("a", 1, &[("v", 1), ("v", -1)]),
        Cell::new("b", 1, &[("v", 1), ("v", -1)]),
        Cell::new("f", 2, &[("a", 1), ("b", 1), ("a", -1), ("b", -1)]),
    ])
}

/// One vertex, one loop, one disk attached along twice the loop.
pub fn projective_plane() -> CellComplex {
    build(vec![
        Cell::vertex("v"),
        Cell::new("a", 1, &[("v", 1), ("v", -1)]),
        Cell::new("f", 2, &[("a", 2)]),
    ])
}

/// Disk as a circle with one 2-cell, together with the boundary circle.
pub fn disk_pair() -> (Arc<CellComplex>, Subcomplex) {
    let d = Arc::new(build(vec![
        Cell::vertex("v"),
        Cell::new("e", 1, &[("v", 1), ("v", -1)]),
        Cell::new("d", 2, &[("e", 1)]),
    ]));
    let rim = Subcomplex::new(d.clone(), &["v", "e"]).expect("rim is closed");
    (d, rim)
}

/// `n`-sphere as one vertex and one `n`-cell (`n ≥ 1`).
pub fn sphere(n: usize) -> CellComplex {
    assert!(n >= 1);
    let top = if n == 1 { Cell::new("s", 1, &[("v", 1), ("v", -1)]) } else { Cell { id: "s".into(), dim: n, boundary: vec![] } };
    build(vec![Cell::vertex("v"), top])
}

/// Wedge of `k` circles at the vertex `*`, loops named `c0, c1, …`.
pub fn wedge_of_circles(k: usize) -> CellComplex {
    let mut cells = vec![Cell::vertex("*")];
    for i in 0..k {
        cells.push(Cell::new(format!("c{i}"), 1, &[("*", 1), ("*", -1)]));
    }
    build(cells)
}

/// `k` disjoint circles, vertex `v{i}` and loop `e{i}`.
pub fn disjoint_circles(k: usize) -> CellComplex {
    let mut cells = Vec::new();
    for i in 0..k {
        let v = format!("v{i}");
        cells.push(Cell::vertex(v.clone()));
        cells.push(Cell { id: format!("e{i}"), dim: 1, boundary: vec![(v.clone(), BigInt::from(1)), (v, BigInt::from(-1))] });
    }
    build(cells)
}

/// Degree-`m` self-map of [`circle`]: `v ↦ v`, `e ↦ m·e`.
pub fn circle_power_map(c: &Arc<CellComplex>, m: i64) -> ChainMap {
    ChainMap::new(
        c.clone(),
        c.clone(),
        &[
            ("v".into(), vec![("v".into(), BigInt::from(1))]),
            ("e".into(), vec![("e".into(), BigInt::from(m))]),
        ],
    )
    .expect("power maps are chain maps")
}

fn simplex_id(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("s{}", parts.join("_"))
}

/// Simplicial complex generated by the given simplices (vertex lists), with
/// the alternating-sign boundary of the sorted vertex order.
pub fn simplicial_complex(generators: &[Vec<usize>]) -> CellComplex {
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in generators {
        let mut g = g.clone();
        g.sort_unstable();
        g.dedup();
        let k = g.len();
        for mask in 1u32..(1 << k) {
            let face: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| g[i]).collect();
            all.insert(face);
        }
    }
    let mut faces: Vec<Vec<usize>> = all.into_iter().collect();
    faces.sort_by_key(|s| s.len());
    let cells = faces
        .iter()
        .map(|s| {
            let boundary = if s.len() == 1 {
                vec![]
            } else {
                (0..s.len())
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        (simplex_id(&f), BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect()
            };
            Cell { id: simplex_id(s), dim: s.len() - 1, boundary }
        })
        .collect();
    build(cells)
}

/// Random simplicial complex with at most `max_cells` cells and simplices of
/// dimension at most three.
pub fn random_simplicial_complex<R: Rng>(rng: &mut R, max_cells: usize) -> CellComplex {
    let vertices = rng.gen_range(3..=(max_cells / 8).clamp(9, 20));
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut size = 0usize;
    for _ in 0..rng.gen_range(1..=(max_cells / 5).max(14)) {
        let k = rng.gen_range(2..=4usize).min(vertices);
        let mut s: Vec<usize> = Vec::with_capacity(k);
        while s.len() < k {
            let v = rng.gen_range(0..vertices);
            if !s.contains(&v) {
                s.push(v);
            }
        }
        generators.push(s);
        let candidate = simplicial_complex(&generators);
        if candidate.len() > max_cells {
            generators.pop();
            break;
        }
        size = candidate.len();
    }
    if size == 0 {
        return simplicial_complex(&[vec![0]]);
    }
    simplicial_complex(&generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CanonicalGroup;
    use crate::complexes::Coefficients;
    use rand::SeedableRng;

    #[test]
    fn boundary_of_tetrahedron_is_a_sphere() {
        let s = simplicial_complex(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(s.homology(2, &Coefficients::Integers), CanonicalGroup::free(1));
        assert!(s.homology(1, &Coefficients::Integers).is_zero());
    }

    #[test]
    fn random_complexes_respect_the_cap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let k = random_simplicial_complex(&mut rng, 200);
            assert!(k.len() <= 200);
            assert!(k.validate().is_ok());
        }
    }
}
