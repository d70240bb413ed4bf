use std::collections::BTreeMap;

use gca_core::linalg::rank;
use gca_core::{Algebra, Coeff, Elem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complex::FreeModuleComplex;
use crate::{ComplexError, Result};

fn evaluate(e: &Elem, point: &[Coeff]) -> Result<Coeff> {
    let consts = Algebra::new(e.algebra().field(), Vec::new())?;
    let images: Vec<Elem> = point.iter().map(|c| Elem::constant(&consts, c.clone())).collect();
    let v = e.substitute(&consts, &images).map_err(|_| ComplexError::Evaluation(format!("{e} is undefined at the sample point")))?;
    Ok(v.as_constant().expect("no generators left"))
}

/// Homology dimensions per degree of the fibre at one point of the base.
fn homology_at(k: &FreeModuleComplex, point: &[Coeff]) -> Result<BTreeMap<i32, usize>> {
    let (lo, hi) = k.window();
    let mut ranks = BTreeMap::new();
    for deg in lo..hi {
        let d = k.d(deg);
        let rows = (0..d.rows())
            .map(|i| (0..d.cols()).map(|j| evaluate(d.get(i, j), point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ranks.insert(deg, rank(&rows));
    }
    let r = |d: i32| ranks.get(&d).copied().unwrap_or(0);
    Ok((lo..=hi).map(|deg| (deg, k.dim(deg) - r(deg) - r(deg - 1))).collect())
}

/// Exact fibre homology at each point (values of the ring generators, in order).
pub fn point_homology_probe(k: &FreeModuleComplex, points: &[Vec<Coeff>]) -> Result<Vec<BTreeMap<i32, usize>>> {
    let n = k.ring().len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(ComplexError::Evaluation(format!("point has {} coordinates, ring has {n} variables", p.len())));
    }
    points.par_iter().map(|p| homology_at(k, p)).collect()
}

/// `count` integer points in [−bound, bound]^n from a seeded stream.
pub fn random_points(n: usize, count: usize, bound: i64, seed: u64) -> Vec<Vec<Coeff>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| Coeff::from_int(rng.gen_range(-bound..=bound))).collect()).collect()
}
