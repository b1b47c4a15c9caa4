use rayon::prelude::*;
use serde::Serialize;

use super::{degree_of, triple_locality};
use crate::error::Result;
use crate::fields::VertexAlgebra;
use crate::fock::{BracketRule, Central, GeneratorSpec, ModeAlgebra, ModePoly, Monomial, Parity, State};
use crate::half::Half;
use crate::scalars::{binomial, Scalar};

/// A failing case: the states involved, rendered, and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub algebra: String,
    pub degree: Half,
    pub checks: Vec<CheckResult>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table, one row per check.
    pub fn table(&self) -> String {
        let mut out = format!("algebra {}  degree {}\n", self.algebra, self.degree);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<15} {:>7} cases  {}\n",
                c.name,
                c.cases,
                if c.passed { "pass" } else { "FAIL" }
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  A = {}\n", w.a));
                if let Some(b) = &w.b {
                    out.push_str(&format!("  B = {b}\n"));
                }
                if let Some(c) = &w.c {
                    out.push_str(&format!("  C = {c}\n"));
                }
                out.push_str(&format!("  {}\n", w.detail));
            }
        }
        out
    }
}

fn mono(m: &Monomial) -> State {
    State::from_monomial(m.clone())
}

fn collect(name: &str, outcomes: Vec<Option<Witness>>) -> CheckResult {
    let cases = outcomes.len();
    let witness = outcomes.into_iter().flatten().next();
    CheckResult {
        name: name.into(),
        passed: witness.is_none(),
        cases,
        witness,
    }
}

/// `A_n |0> = 0` for `-deg A < n <= d`, and `A_{-deg A} |0> = A`.
fn vacuum_case(va: &VertexAlgebra, a: &State, d: Half) -> Option<String> {
    let da = degree_of(va, a);
    let vac = State::vacuum();
    if va.mode_apply(a, -da, &vac) != *a {
        return Some(format!("A_{} |0> differs from A", -da));
    }
    let mut n = -da + Half::ONE;
    while n <= d {
        let out = va.mode_apply(a, n, &vac);
        if !out.is_zero() {
            return Some(format!("A_{n} |0> = {}", va.render(&out)));
        }
        n += Half::ONE;
    }
    None
}

/// `[T, A_n] B = (-n - deg A + 1) A_{n-1} B` and `(T A)_n B = (-n - deg A) A_n B`.
fn translation_case(va: &VertexAlgebra, a: &State, b: &State, max: Half) -> Option<String> {
    let da = degree_of(va, a);
    let db = degree_of(va, b);
    let ta = va.translation(a);
    let tb = va.translation(b);
    // output degrees db - n range over -1..=max
    let mut n = -da + Half::from_int((db + da - max).ceil());
    while db - n >= -Half::ONE {
        let lhs = va.translation(&va.mode_apply(a, n, b)).sub(&va.mode_apply(a, n, &tb));
        let rhs = va.mode_apply(a, n - Half::ONE, b).scale(&(-n - da + Half::ONE).to_scalar());
        if lhs != rhs {
            return Some(format!("[T, A_{n}] B = {} but expected {}", va.render(&lhs), va.render(&rhs)));
        }
        let d1 = va.mode_apply(&ta, n, b);
        let d2 = va.mode_apply(a, n, b).scale(&(-n - da).to_scalar());
        if d1 != d2 {
            return Some(format!("(TA)_{n} B = {} but expected {}", va.render(&d1), va.render(&d2)));
        }
        n += Half::ONE;
    }
    None
}

/// Weak associativity
/// `(z0+z2)^l Y(A, z0+z2) Y(B, z2) C = (z2+z0)^l Y(Y(A, z0) B, z2) C`
/// with `z^l Y(A, z) C` regular, compared coefficientwise on `z0^i z2^j`.
fn associativity_case(va: &VertexAlgebra, a: &State, b: &State, c: &State, max: Half) -> Option<String> {
    let da = degree_of(va, a);
    let db = degree_of(va, b);
    let dc = degree_of(va, c);
    let l = (dc + da).ceil().max(0);
    // output degree of the (i, j) coefficient is x + i + j
    let x = dc + da + db - Half::from_int(l);
    let i_lo = -(da + db).ceil() - 1;
    let i_hi = (max - da - db).floor().max(i_lo + 1);
    for i in i_lo..=i_hi {
        let j_lo = (-x).ceil() - i;
        let j_hi = (max - x).floor() - i;
        for j in j_lo..=j_hi {
            // B_k C with k = q - db, t = j + q >= 0, q <= dc + db
            if dc + db + Half::from_int(j) > max {
                continue;
            }
            let mut lhs = State::zero();
            let q_hi = (dc + db).floor();
            for q in (-j)..=q_hi {
                let t = j + q;
                let e = i + t;
                let m = Half::from_int(l) - da - Half::from_int(e);
                let k = Half::from_int(q) - db;
                let coeff = binomial(e, t);
                if coeff == num_traits::Zero::zero() {
                    continue;
                }
                let bc = va.mode_apply(b, k, c);
                if bc.is_zero() {
                    continue;
                }
                lhs.add_scaled(&va.mode_apply(a, m, &bc), &Scalar::from_rational(coeff));
            }
            let mut rhs = State::zero();
            for r in 0..=l {
                let n = Half::from_int(r - i) - da;
                let ab = va.mode_apply(a, n, b);
                if ab.is_zero() {
                    continue;
                }
                let dab = db - n;
                // l - r - p - dab = j
                let p = Half::from_int(l - r - j) - dab;
                let coeff = binomial(l, r);
                rhs.add_scaled(&va.mode_apply(&ab, p, c), &Scalar::from_rational(coeff));
            }
            if lhs != rhs {
                return Some(format!(
                    "coefficient of z0^{i} z2^{j}: {} on the product side, {} on the iterate side",
                    va.render(&lhs),
                    va.render(&rhs)
                ));
            }
        }
    }
    None
}

/// Vacuum, translation, locality and associativity on all basis triples of
/// total degree at most `d`. Failures are reported, never thrown.
pub fn verify_axioms(name: &str, va: &VertexAlgebra, d: Half) -> AxiomReport {
    let basis: Vec<(Monomial, Half)> = va
        .fock()
        .basis_up_to(d)
        .into_iter()
        .map(|m| {
            let deg = va.fock().degree(&m);
            (m, deg)
        })
        .collect();
    let window = d + Half::ONE;
    let render = |m: &Monomial| va.render(&mono(m));

    let vacuum: Vec<Option<Witness>> = basis
        .par_iter()
        .map(|(m, _)| {
            let mut detail = vacuum_case(va, &mono(m), d);
            if m.is_vacuum() && !va.translation(&State::vacuum()).is_zero() {
                detail = Some("T|0> is not zero".into());
            }
            detail.map(|detail| Witness {
                a: render(m),
                b: None,
                c: None,
                detail,
            })
        })
        .collect();

    let pairs: Vec<(&Monomial, &Monomial)> = basis
        .iter()
        .flat_map(|(a, da)| {
            basis
                .iter()
                .filter(move |(_, db)| *da + *db <= d)
                .map(move |(b, _)| (a, b))
        })
        .collect();
    let translation: Vec<Option<Witness>> = pairs
        .par_iter()
        .map(|(a, b)| {
            translation_case(va, &mono(a), &mono(b), window).map(|detail| Witness {
                a: render(a),
                b: Some(render(b)),
                c: None,
                detail,
            })
        })
        .collect();

    let mut triples: Vec<(&Monomial, &Monomial, &Monomial)> = Vec::new();
    for (a, da) in &basis {
        for (b, db) in &basis {
            for (c, dc) in &basis {
                if *da + *db + *dc <= d {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let locality: Vec<Option<Witness>> = triples
        .par_iter()
        .map(|(a, b, c)| {
            let (sa, sb, sc) = (mono(a), mono(b), mono(c));
            let cap = (d + degree_of(va, &sa) + degree_of(va, &sb)).floor();
            match triple_locality(va, &sa, &sb, &sc, window, cap) {
                Some(_) => None,
                None => Some(Witness {
                    a: render(a),
                    b: Some(render(b)),
                    c: Some(render(c)),
                    detail: format!("(z-w)^N [Y(A,z), Y(B,w)] C is nonzero for every N <= {cap}"),
                }),
            }
        })
        .collect();
    let associativity: Vec<Option<Witness>> = triples
        .par_iter()
        .map(|(a, b, c)| {
            associativity_case(va, &mono(a), &mono(b), &mono(c), window).map(|detail| Witness {
                a: render(a),
                b: Some(render(b)),
                c: Some(render(c)),
                detail,
            })
        })
        .collect();

    AxiomReport {
        algebra: name.to_string(),
        degree: d,
        checks: vec![
            collect("vacuum", vacuum),
            collect("translation", translation),
            collect("locality", locality),
            collect("associativity", associativity),
        ],
    }
}

/// Re-run the check named `check` on a witness; `true` if it still fails.
pub fn reverify(va: &VertexAlgebra, check: &str, w: &Witness, d: Half) -> Result<bool> {
    let a = va.parse(&w.a)?;
    let b = w.b.as_deref().map(|s| va.parse(s)).transpose()?;
    let c = w.c.as_deref().map(|s| va.parse(s)).transpose()?;
    let window = d + Half::ONE;
    Ok(match (check, b, c) {
        ("vacuum", _, _) => vacuum_case(va, &a, d).is_some(),
        ("translation", Some(b), _) => translation_case(va, &a, &b, window).is_some(),
        ("locality", Some(b), Some(c)) => {
            let cap = (d + degree_of(va, &a) + degree_of(va, &b)).floor();
            triple_locality(va, &a, &b, &c, window, cap).is_none()
        }
        ("associativity", Some(b), Some(c)) => associativity_case(va, &a, &b, &c, window).is_some(),
        _ => false,
    })
}

/// A Heisenberg-like table with `[b_m, b_n] = delta_{m+n,0}`, missing the
/// factor `m`. It is not skew, so the axiom checks must reject it.
pub fn corrupted_heisenberg() -> VertexAlgebra {
    let rule = BracketRule {
        terms: vec![],
        central: Some(Central {
            param: "1".into(),
            coeff: ModePoly::constant(Scalar::one()),
        }),
    };
    let alg = ModeAlgebra::new_unchecked(
        "corrupted",
        vec![GeneratorSpec::new("b", Half::ONE, Parity::Even)],
        vec![((0, 0), rule)],
        None,
    )
    .expect("well-formed table");
    VertexAlgebra::from_algebra(alg)
}
