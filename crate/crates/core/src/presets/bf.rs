use std::collections::BTreeMap;

use serde::Serialize;

use super::{fermion, lattice, AlgebraInstance};
use crate::fock::{Mode, Monomial, State};
use crate::half::Half;
use crate::linalg;

/// Outcome of comparing the fermionic ghost system with `V_Z`.
#[derive(Clone, Debug, Serialize)]
pub struct BosonFermionReport {
    pub degree: Half,
    /// `(degree, dim on the fermion side, dim on the lattice side, rank of the map)`
    pub dims: Vec<(Half, usize, usize, usize)>,
    pub intertwinings_checked: usize,
    pub mismatch: Option<String>,
}

impl BosonFermionReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Charge `#psi* - #psi` of a fermion monomial.
fn charge(m: &Monomial) -> i64 {
    m.word.iter().map(|x| if x.gen == 0 { -1 } else { 1 }).sum()
}

/// Degree of a fermion monomial transported to `V_Z`: the fermion degree
/// plus half the charge, so that `psi(-1)|0>` lands on `1_{-1}`.
pub fn fermion_lattice_degree(fermion: &AlgebraInstance, m: &Monomial) -> Half {
    fermion.fock().degree(m) + Half::from_doubled(charge(m))
}

struct Map {
    fer: AlgebraInstance,
    lat: AlgebraInstance,
    psi: State,
    psi_star: State,
}

impl Map {
    /// Image of `psi_n` is `(1_{-1})_{n+1/2}`, image of `psi*_n` is `(1_1)_{n-1/2}`.
    fn mode(&self, gen: usize, n: Half, s: &State) -> State {
        let half = Half::from_doubled(1);
        if gen == 0 {
            self.lat.va().mode_apply(&self.psi, n + half, s)
        } else {
            self.lat.va().mode_apply(&self.psi_star, n - half, s)
        }
    }

    fn image_monomial(&self, m: &Monomial) -> State {
        let mut s = State::vacuum();
        for x in m.word.iter().rev() {
            s = self.mode(x.gen, x.n, &s);
        }
        s
    }

    fn image(&self, v: &State) -> State {
        let mut out = State::zero();
        for (m, c) in v.iter() {
            out.add_scaled(&self.image_monomial(m), c);
        }
        out
    }
}

/// Verify that `psi_n -> (1_{-1})_{n+1/2}`, `psi*_n -> (1_1)_{n-1/2}` defines an
/// isomorphism from the ghost system onto `V_Z`, up to transported degree `d`.
pub fn boson_fermion_check(d: Half) -> BosonFermionReport {
    let fer = fermion();
    let lat = lattice(1).expect("N = 1 is valid");
    let map = Map {
        psi: State::from_monomial(Monomial::sector_vacuum(-1)),
        psi_star: State::from_monomial(Monomial::sector_vacuum(1)),
        fer,
        lat,
    };
    let mut report = BosonFermionReport {
        degree: d,
        dims: vec![],
        intertwinings_checked: 0,
        mismatch: None,
    };
    // |charge| <= sqrt(2d) on both sides, so fermion degree is at most d + sqrt(2d)/2
    let max_charge = (0..).find(|q: &i64| q * q > d.doubled()).unwrap_or(0);
    let fer_cap = d + Half::from_doubled(max_charge);
    let mut by_degree: BTreeMap<Half, Vec<Monomial>> = BTreeMap::new();
    for m in map.fer.fock().basis_up_to(fer_cap) {
        let e = fermion_lattice_degree(&map.fer, &m);
        if e <= d {
            by_degree.entry(e).or_default().push(m);
        }
    }
    let mut e = Half::ZERO;
    while e <= d {
        let fer_basis = by_degree.get(&e).cloned().unwrap_or_default();
        let lat_basis = map.lat.fock().basis_all(e);
        let images: Vec<State> = fer_basis.iter().map(|m| map.image_monomial(m)).collect();
        for (m, img) in fer_basis.iter().zip(&images) {
            if img.monomials().any(|b| map.lat.fock().degree(b) != e) {
                report.mismatch.get_or_insert(format!(
                    "image of {} is not homogeneous of degree {e}",
                    map.fer.render(&State::from_monomial(m.clone()))
                ));
            }
        }
        let matrix: linalg::Matrix = images
            .iter()
            .map(|img| lat_basis.iter().map(|b| img.coefficient(b)).collect())
            .collect();
        let rank = linalg::rank(&matrix, lat_basis.len());
        report.dims.push((e, fer_basis.len(), lat_basis.len(), rank));
        if (fer_basis.len() != lat_basis.len() || rank != lat_basis.len()) && report.mismatch.is_none() {
            report.mismatch = Some(format!(
                "degree {e}: fermion side {} states, lattice side {}, map rank {rank}",
                fer_basis.len(),
                lat_basis.len()
            ));
        }
        e += Half::from_doubled(1);
    }
    // intertwining: Phi(x_n v) = image(x_n) Phi(v) whenever x_n v stays in range
    'outer: for (e, basis) in &by_degree {
        for m in basis {
            let v = State::from_monomial(m.clone());
            let phi_v = map.image(&v);
            for gen in 0..2 {
                // psi_n moves transported degree by -n - 1/2, psi*_n by -n + 1/2
                let shift = if gen == 0 { Half::from_doubled(-1) } else { Half::from_doubled(1) };
                let lo = *e + shift - d;
                let hi = *e + shift;
                let mut n = Half::from_int(lo.ceil());
                while n <= hi {
                    let xv = map.fer.fock().apply(Mode::new(gen, n), &v);
                    let lhs = map.image(&xv);
                    let rhs = map.mode(gen, n, &phi_v);
                    report.intertwinings_checked += 1;
                    if lhs != rhs {
                        let name = map.fer.algebra().generator(gen).name.clone();
                        report.mismatch.get_or_insert(format!(
                            "{name}({n}) on {}: fermion side maps to {}, lattice side gives {}",
                            map.fer.render(&v),
                            map.lat.render(&lhs),
                            map.lat.render(&rhs)
                        ));
                        break 'outer;
                    }
                    n += Half::ONE;
                }
            }
        }
    }
    report
}
