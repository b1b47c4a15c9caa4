//! Standard vertex (super)algebras and their distinguished vectors.

mod bf;
mod lie;

use std::sync::Arc;

pub use bf::{boson_fermion_check, fermion_lattice_degree, BosonFermionReport};
pub use lie::LieData;

use crate::error::{Error, Result};
use crate::fields::VertexAlgebra;
use crate::fock::{
    AlgebraDocument, BracketRule, BracketTerm, Central, Fock, GeneratorSpec, LatticeData, ModeAlgebra, ModePoly, Mode,
    Monomial, Parity, State,
};
use crate::half::Half;
use crate::scalars::{ParamPoint, Scalar};

/// A vertex algebra with its generating states and, when it has one, its
/// conformal vector and central charge.
#[derive(Clone, Debug)]
pub struct AlgebraInstance {
    name: String,
    va: Arc<VertexAlgebra>,
    generating: Vec<State>,
    conformal: Option<(State, Scalar)>,
}

impl AlgebraInstance {
    pub fn new(name: &str, va: VertexAlgebra) -> AlgebraInstance {
        let fock = va.fock();
        let alg = fock.algebra();
        let mut generating: Vec<State> = (0..alg.generators().len())
            .map(|g| {
                fock.apply(
                    Mode::new(g, -alg.weight(g)),
                    &State::vacuum(),
                )
            })
            .collect();
        if alg.lattice().is_some() {
            generating.push(State::from_monomial(Monomial::sector_vacuum(1)));
            generating.push(State::from_monomial(Monomial::sector_vacuum(-1)));
        }
        AlgebraInstance {
            name: name.to_string(),
            va: Arc::new(va),
            generating,
            conformal: None,
        }
    }

    /// Attach a conformal vector with central charge `c`.
    pub fn with_conformal(mut self, omega: State, c: Scalar) -> AlgebraInstance {
        self.conformal = Some((omega, c));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn va(&self) -> &VertexAlgebra {
        &self.va
    }

    pub fn shared(&self) -> Arc<VertexAlgebra> {
        self.va.clone()
    }

    pub fn fock(&self) -> &Fock {
        self.va.fock()
    }

    pub fn algebra(&self) -> &ModeAlgebra {
        self.va.algebra()
    }

    /// States `x_{-weight(x)} |0>` of the generators, plus `1_{±1}` for
    /// lattice algebras.
    pub fn generating_states(&self) -> &[State] {
        &self.generating
    }

    pub fn conformal_vector(&self) -> Option<&State> {
        self.conformal.as_ref().map(|c| &c.0)
    }

    pub fn central_charge(&self) -> Option<&Scalar> {
        self.conformal.as_ref().map(|c| &c.1)
    }

    pub fn parse(&self, src: &str) -> Result<State> {
        self.va.parse(src)
    }

    pub fn render(&self, s: &State) -> String {
        self.va.render(s)
    }

    /// `L_n A` for the conformal vector.
    pub fn virasoro_mode(&self, n: i64, a: &State) -> Result<State> {
        let omega = self.conformal_vector().ok_or(Error::NotConformal)?;
        Ok(self.va.mode_apply(omega, Half::from_int(n), a))
    }

    /// Default truncation degree for axiom verification.
    pub fn default_degree(&self) -> Half {
        match self.name.as_str() {
            "affine:sl3" | "lattice:3" => Half::from_int(3),
            _ => Half::from_int(4),
        }
    }

    /// Substitute parameter values everywhere.
    pub fn specialize(&self, point: &ParamPoint) -> Result<AlgebraInstance> {
        let alg = self.algebra().specialize(point)?;
        let cap = self.fock().zero_weight_cap();
        let mut out = AlgebraInstance::new(&self.name, VertexAlgebra::new(Fock::new(alg).with_zero_weight_cap(cap)));
        // a conformal vector with a pole at the point (Sugawara at the
        // critical level) is dropped
        if let Some((omega, c)) = &self.conformal {
            match (omega.map_scalars(|s| s.specialize(point)), c.specialize(point)) {
                (Ok(omega), Ok(c)) => out = out.with_conformal(omega, c),
                (Err(Error::PoleAtPoint { .. }), _) | (_, Err(Error::PoleAtPoint { .. })) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        Ok(out)
    }
}

fn central(param: &str, coeff: &str) -> Option<Central> {
    Some(Central {
        param: param.to_string(),
        coeff: ModePoly::parse(coeff).expect("preset coefficient"),
    })
}

fn even(name: &str, weight: i64) -> GeneratorSpec {
    GeneratorSpec::new(name, Half::from_int(weight), Parity::Even)
}

fn odd(name: &str, weight: i64) -> GeneratorSpec {
    GeneratorSpec::new(name, Half::from_int(weight), Parity::Odd)
}

fn build(alg: ModeAlgebra) -> VertexAlgebra {
    VertexAlgebra::from_algebra(alg)
}

/// The Heisenberg algebra `pi` with conformal vector
/// `1/2 b(-1)^2 + lambda b(-2)` of central charge `1 - 12 lambda^2`.
pub fn heisenberg(lambda: Scalar) -> AlgebraInstance {
    let rule = BracketRule {
        terms: vec![],
        central: central("1", "m"),
    };
    let alg = ModeAlgebra::new("heisenberg", vec![even("b", 1)], vec![((0, 0), rule)], None).expect("valid");
    let inst = AlgebraInstance::new("heisenberg", build(alg));
    let omega = inst
        .parse("1/2 b(-1)^2 |0>")
        .expect("valid")
        .add(&inst.parse("b(-2) |0>").expect("valid").scale(&lambda));
    let c = Scalar::one() - Scalar::from_int(12) * &lambda * &lambda;
    inst.with_conformal(omega, c)
}

/// The Virasoro vacuum module `Vir_c` with conformal vector `L(-2) v_c`.
pub fn virasoro(c: Scalar) -> AlgebraInstance {
    let rule = BracketRule {
        terms: vec![BracketTerm {
            gen: 0,
            coeff: ModePoly::parse("m-n").expect("valid"),
            only_at: None,
        }],
        central: Some(Central {
            param: "1".into(),
            coeff: ModePoly::parse("(m^3-m)/12").expect("valid").scale(&c),
        }),
    };
    let alg = ModeAlgebra::new("virasoro", vec![even("L", 2)], vec![((0, 0), rule)], None)
        .expect("valid")
        .with_vacuum_label("v_c");
    let inst = AlgebraInstance::new("virasoro", build(alg));
    let omega = inst.parse("L(-2) v_c").expect("valid");
    inst.with_conformal(omega, c)
}

/// Mode algebra of the affine Kac-Moody algebra at level `k`:
/// `[J^a_m, J^b_n] = [a,b]_{m+n} + k m (a,b) delta_{m+n,0}`.
pub fn affine_algebra(g: &LieData, k: &Scalar) -> ModeAlgebra {
    let n = g.dim();
    let gens = g.basis.iter().map(|name| even(name, 1)).collect();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in a..n {
            let terms = (0..n)
                .filter(|&c| !g.structure[a][b][c].is_zero())
                .map(|c| BracketTerm {
                    gen: c,
                    coeff: ModePoly::constant(g.structure[a][b][c].clone()),
                    only_at: None,
                })
                .collect::<Vec<_>>();
            let form = &g.form[a][b];
            let central = (!form.is_zero()).then(|| Central {
                param: "1".into(),
                coeff: ModePoly::parse("m").expect("valid").scale(&(form * k)),
            });
            if !terms.is_empty() || central.is_some() {
                brackets.push(((a, b), BracketRule { terms, central }));
            }
        }
    }
    ModeAlgebra::new(&format!("affine:{}", g.name), gens, brackets, None)
        .expect("validated Lie data gives a valid algebra")
        .with_vacuum_label("v_k")
}

/// The vacuum module `V_k(g)`. When `k + h` is a nonzero scalar the
/// Sugawara vector is attached, its central charge read off from `L_2 omega`.
pub fn affine(g: &LieData, k: Scalar) -> AlgebraInstance {
    let inst = AlgebraInstance::new(&format!("affine:{}", g.name), build(affine_algebra(g, &k)));
    let shifted = &k + &Scalar::from_int(g.dual_coxeter);
    if shifted.is_zero() {
        return inst;
    }
    let omega = sugawara_in(&inst, g, &k).expect("noncritical level");
    let c = central_charge_of(&inst, &omega);
    inst.with_conformal(omega, c)
}

/// `1/(2(k+h)) sum_{a,b} G^{ab} J^a(-1) J^b(-1) v_k` with `G` the inverse
/// Gram matrix of the invariant form.
pub fn sugawara(inst: &AlgebraInstance, g: &LieData, k: &Scalar) -> Result<State> {
    sugawara_in(inst, g, k)
}

fn sugawara_in(inst: &AlgebraInstance, g: &LieData, k: &Scalar) -> Result<State> {
    let shifted = k + &Scalar::from_int(g.dual_coxeter);
    let pref = Scalar::from_ratio(1, 2).checked_div(&shifted).map_err(|_| Error::PoleAtPoint {
        denominator: format!("k+{}", g.dual_coxeter),
    })?;
    let ginv = g.inverse_form();
    let fock = inst.fock();
    let vac = State::vacuum();
    let mut omega = State::zero();
    for (a, row) in ginv.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let t = fock.apply(Mode::int(a, -1), &fock.apply(Mode::int(b, -1), &vac));
            omega.add_scaled(&t, &(x * &pref));
        }
    }
    Ok(omega)
}

/// `2 <vac, omega_2 omega>`.
fn central_charge_of(inst: &AlgebraInstance, omega: &State) -> Scalar {
    let v = inst.va().mode_apply(omega, Half::from_int(2), omega);
    &v.coefficient(&Monomial::vacuum()) * &Scalar::from_int(2)
}

/// Fermionic ghosts: `psi` of weight 1 and `psi*` of weight 0 with
/// `[psi_m, psi*_n]_+ = delta_{m+n,0}`; central charge `-2`.
pub fn fermion() -> AlgebraInstance {
    let rule = BracketRule {
        terms: vec![],
        central: central("1", "1"),
    };
    let alg = ModeAlgebra::new("fermion", vec![odd("psi", 1), odd("psi*", 0)], vec![((0, 1), rule)], None)
        .expect("valid");
    let inst = AlgebraInstance::new("fermion", build(alg));
    let omega = inst.parse("-psi(-1) psi*(-1) |0>").expect("valid");
    inst.with_conformal(omega, Scalar::from_int(-2))
}

/// `n` copies of the Weyl algebra: `a_i` of weight 1, `a_i*` of weight 0,
/// `[a_{i,m}, a*_{j,n}] = delta_{ij} delta_{m+n,0}`; central charge `2n`.
pub fn weyl(n: usize) -> AlgebraInstance {
    let names: Vec<(String, String)> = if n == 1 {
        vec![("a".into(), "a*".into())]
    } else {
        (1..=n).map(|i| (format!("a{i}"), format!("a{i}*"))).collect()
    };
    let mut gens = Vec::new();
    let mut brackets = Vec::new();
    for (i, (a, b)) in names.iter().enumerate() {
        gens.push(even(a, 1));
        gens.push(even(b, 0));
        brackets.push((
            (2 * i, 2 * i + 1),
            BracketRule {
                terms: vec![],
                central: central("1", "1"),
            },
        ));
    }
    let name = format!("weyl:{n}");
    let alg = ModeAlgebra::new(&name, gens, brackets, None).expect("valid");
    let inst = AlgebraInstance::new(&name, build(alg));
    let mut omega = State::zero();
    for i in 0..n {
        let fock = inst.fock();
        let t = fock.apply(Mode::int(2 * i, -1), &fock.apply(Mode::int(2 * i + 1, -1), &State::vacuum()));
        omega.add_scaled(&t, &Scalar::one());
    }
    inst.with_conformal(omega, Scalar::from_int(2 * n as i64))
}

/// The lattice vertex algebra `V_{sqrt(N) Z}` on the charge field
/// `h = sqrt(N) b`; conformal vector `h(-1)^2 / (2N)` of central charge 1.
pub fn lattice(n: i64) -> Result<AlgebraInstance> {
    if n < 1 {
        return Err(Error::InvalidAlgebra("lattice needs N >= 1".into()));
    }
    let rule = BracketRule {
        terms: vec![],
        central: Some(Central {
            param: "1".into(),
            coeff: ModePoly::parse("m").expect("valid").scale(&Scalar::from_int(n)),
        }),
    };
    let name = format!("lattice:{n}");
    let alg = ModeAlgebra::new(&name, vec![even("h", 1)], vec![((0, 0), rule)], Some(LatticeData { n, charge: 0 }))?;
    let inst = AlgebraInstance::new(&name, build(alg));
    let omega = inst.parse("h(-1)^2 |0>")?.scale(&Scalar::from_ratio(1, 2 * n));
    Ok(inst.with_conformal(omega, Scalar::one()))
}

/// The commutative vertex algebra freely generated as a differential
/// algebra by the given `(name, weight)` pairs: all brackets vanish and
/// `Y(A, z) = sum_n z^n / n! T^n A` acting by multiplication.
pub fn commutative_va(generators: &[(&str, i64)]) -> Result<AlgebraInstance> {
    let gens = generators.iter().map(|(n, w)| even(n, *w)).collect();
    let alg = ModeAlgebra::new("commutative", gens, vec![], None)?;
    Ok(AlgebraInstance::new("commutative", build(alg)))
}

/// Load an algebra definition from a JSON document.
pub fn from_document(doc: &AlgebraDocument) -> Result<AlgebraInstance> {
    let alg = doc.build()?;
    let name = alg.name().to_string();
    Ok(AlgebraInstance::new(&name, build(alg)))
}

/// Resolve a preset name: `heisenberg`, `virasoro`, `affine:sl2`,
/// `affine:sl3`, `fermion`, `weyl:N`, `lattice:N`, `commutative`.
/// Parametric presets use the symbols `lambda`, `c` and `k`.
pub fn preset(name: &str) -> Result<AlgebraInstance> {
    let unknown = || Error::Unsupported(format!("unknown algebra `{name}`"));
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let number = |a: Option<&str>| -> Result<i64> {
        a.and_then(|s| s.parse().ok()).filter(|&n| n >= 1).ok_or_else(unknown)
    };
    match head {
        "heisenberg" if arg.is_none() => Ok(heisenberg(Scalar::param("lambda"))),
        "virasoro" if arg.is_none() => Ok(virasoro(Scalar::param("c"))),
        "affine" => match arg {
            Some("sl2") => Ok(affine(&LieData::sl2(), Scalar::param("k"))),
            Some("sl3") => Ok(affine(&LieData::sl3(), Scalar::param("k"))),
            _ => Err(unknown()),
        },
        "fermion" if arg.is_none() => Ok(fermion()),
        "weyl" => Ok(weyl(number(arg)? as usize)),
        "lattice" => lattice(number(arg)?),
        "commutative" if arg.is_none() => commutative_va(&[("x", 1)]),
        _ => Err(unknown()),
    }
}

/// Coefficients of `Y(1_l, z) B` on the exponents `window`, i.e. the map
/// `e -> (1_l)_{-e - l^2 N/2} B`.
pub fn lattice_vertex_op(
    inst: &AlgebraInstance,
    l: i64,
    window: impl IntoIterator<Item = Half>,
    target: &State,
) -> Result<Vec<(Half, State)>> {
    let lat = inst.algebra().lattice().ok_or(Error::SectorMismatch)?;
    let energy = Half::from_doubled(l * l * lat.n);
    let a = State::from_monomial(Monomial::sector_vacuum(l));
    Ok(window
        .into_iter()
        .map(|e| (e, inst.va().mode_apply(&a, -e - energy, target)))
        .collect())
}

#[cfg(test)]
mod tests;
