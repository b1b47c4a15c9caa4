//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! All comparisons are exact; the only numeric thresholds are time budgets.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use vertex_core::characters::{boson_fermion_character_check, character, lattice_theta_character, QSeries};
use vertex_core::coords::{huang_check, primary_differential_check, CoordChange, Truncation};
use vertex_core::correlators::{bootstrap_verify, consistency_check, heisenberg_npoint, RationalCorrelator};
use vertex_core::fock::State;
use vertex_core::half::Half;
use vertex_core::ope::{center, commutator_via_formula, corrupted_heisenberg, singular_part, verify_axioms};
use vertex_core::presets::{self, AlgebraInstance, LieData};
use vertex_core::scalars::{parse_scalar, ParamPoint, Poly, Rational, Scalar};

const AXIOM_SUITE_BUDGET: Duration = Duration::from_secs(120);
const CENTER_BUDGET: Duration = Duration::from_secs(60);
const SUITES: &[(&str, i64)] = &[
    ("heisenberg", 4),
    ("virasoro", 4),
    ("affine:sl2", 4),
    ("fermion", 4),
    ("weyl:1", 4),
    ("lattice:1", 4),
    ("lattice:2", 4),
    ("commutative", 4),
    ("affine:sl3", 3),
    ("lattice:3", 3),
];
const CONFORMAL_PRESETS: &[&str] = &[
    "heisenberg",
    "virasoro",
    "affine:sl2",
    "affine:sl3",
    "fermion",
    "weyl:1",
    "lattice:1",
    "lattice:2",
    "lattice:3",
];
const COMMUTATOR_DEGREE: i64 = 5;
const MODE_RANGE: i64 = 3;
const CHARACTER_CUTOFF: i64 = 10;
const BF_DOUBLED_CUTOFF: i64 = 8;
const NPOINT_MAX: usize = 6;
const REGION_MAX: usize = 4;
const REGION_FUNCTIONAL_DEGREE: i64 = 4;
const REGION_RADIUS: i64 = 3;
const ROUNDTRIP_CASES: u32 = 64;
const COORD_DEGREE: i64 = 4;

type Outcome = Result<String, String>;

fn h(n: i64) -> Half {
    Half::from_int(n)
}

fn s(src: &str) -> Scalar {
    parse_scalar(src).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn basis_states(inst: &AlgebraInstance, d: i64) -> Vec<State> {
    inst.fock().basis_up_to(h(d)).into_iter().map(State::from_monomial).collect()
}

fn axiom_suites() -> Outcome {
    let mut slowest = (String::new(), Duration::ZERO);
    for (name, d) in SUITES {
        let inst = presets::preset(name).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let r = verify_axioms(name, inst.va(), h(*d));
        let dt = t.elapsed();
        check(r.passed(), || format!("{name} at degree {d}:\n{}", r.table()))?;
        check(dt < AXIOM_SUITE_BUDGET, || format!("{name} took {dt:?}"))?;
        if dt > slowest.1 {
            slowest = (name.to_string(), dt);
        }
    }
    let bad = verify_axioms("corrupted", &corrupted_heisenberg(), h(2));
    let witness = bad.checks.iter().find_map(|c| c.witness.clone());
    check(!bad.passed() && witness.is_some(), || "corrupted bracket was accepted".into())?;
    Ok(format!(
        "{} suites pass (slowest {} in {:.1?}); corrupted bracket rejected with witness",
        SUITES.len(),
        slowest.0,
        slowest.1
    ))
}

fn conformal_ope() -> Outcome {
    for name in CONFORMAL_PRESETS {
        let inst = presets::preset(name).unwrap();
        let w = inst.conformal_vector().ok_or(format!("{name} has no conformal vector"))?.clone();
        let c = inst.central_charge().unwrap().clone();
        let mut expected = BTreeMap::new();
        expected.insert(4, State::vacuum().scale(&(&c * &s("1/2"))));
        expected.insert(2, w.scale(&Scalar::from_int(2)));
        expected.insert(1, inst.va().translation(&w));
        let got = singular_part(inst.va(), &w, &w);
        check(got.poles == expected, || format!("{name}: {}", got.render(inst.va())))?;
    }
    Ok(format!("w(z)w(w) exact in {} conformal presets", CONFORMAL_PRESETS.len()))
}

fn commutator_regeneration() -> Outcome {
    let vir = presets::preset("virasoro").unwrap();
    let va = vir.va();
    let w = vir.conformal_vector().unwrap().clone();
    let basis = basis_states(&vir, COMMUTATOR_DEGREE);
    let mut cases = 0;
    for m in -MODE_RANGE..=MODE_RANGE {
        for n in -MODE_RANGE..=MODE_RANGE {
            let f = commutator_via_formula(va, &w, h(m), &w, h(n));
            for v in &basis {
                let mut rhs = va.mode_apply(&w, h(m + n), v).scale(&Scalar::from_int(m - n));
                if m + n == 0 {
                    rhs = rhs.add(&v.scale(&(&s("c") * &Scalar::from_ratio(m * m * m - m, 12))));
                }
                check(f.apply(va, v) == rhs, || format!("[L_{m}, L_{n}] on {}", vir.render(v)))?;
                cases += 1;
            }
        }
    }
    // sl2 currents against the bracket and form written out by hand
    let aff = presets::preset("affine:sl2").unwrap();
    let va = aff.va();
    let cur = |x: &str| aff.parse(&format!("{x}(-1) v_k")).unwrap();
    let zero = State::zero();
    let bracket = |a: &str, b: &str| -> State {
        match (a, b) {
            ("e", "f") => cur("h"),
            ("f", "e") => cur("h").scale(&Scalar::from_int(-1)),
            ("h", "e") => cur("e").scale(&Scalar::from_int(2)),
            ("e", "h") => cur("e").scale(&Scalar::from_int(-2)),
            ("h", "f") => cur("f").scale(&Scalar::from_int(-2)),
            ("f", "h") => cur("f").scale(&Scalar::from_int(2)),
            _ => zero.clone(),
        }
    };
    let form = |a: &str, b: &str| -> i64 {
        match (a, b) {
            ("e", "f") | ("f", "e") => 1,
            ("h", "h") => 2,
            _ => 0,
        }
    };
    let basis = basis_states(&aff, COMMUTATOR_DEGREE);
    for a in ["e", "h", "f"] {
        for b in ["e", "h", "f"] {
            for m in -MODE_RANGE..=MODE_RANGE {
                for n in -MODE_RANGE..=MODE_RANGE {
                    let f = commutator_via_formula(va, &cur(a), h(m), &cur(b), h(n));
                    let ab = bracket(a, b);
                    for v in &basis {
                        let mut rhs = va.mode_apply(&ab, h(m + n), v);
                        if m + n == 0 && form(a, b) != 0 {
                            rhs = rhs.add(&v.scale(&(&s("k") * &Scalar::from_int(m * form(a, b)))));
                        }
                        check(f.apply(va, v) == rhs, || format!("[{a}_{m}, {b}_{n}] on {}", aff.render(v)))?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("Virasoro and sl2 current relations on {cases} (mode pair, state) cases to degree {COMMUTATOR_DEGREE}"))
}

type M2 = [[Rational; 2]; 2];

fn m2(a: [[i64; 2]; 2]) -> M2 {
    a.map(|r| r.map(|x| Rational::from_integer(x.into())))
}

fn mmul(a: &M2, b: &M2) -> M2 {
    let mut out = m2([[0, 0], [0, 0]]);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

fn comm(a: &M2, b: &M2) -> M2 {
    let (x, y) = (mmul(a, b), mmul(b, a));
    let mut out = x.clone();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &x[i][j] - &y[i][j];
        }
    }
    out
}

fn tr(a: &M2) -> Rational {
    &a[0][0] + &a[1][1]
}

/// `c = k dim g / (k + h)` with the dual Coxeter number read off the
/// Casimir on the adjoint, all from 2x2 matrices.
fn sugawara_oracle() -> (usize, Rational) {
    let basis = [m2([[0, 1], [0, 0]]), m2([[1, 0], [0, -1]]), m2([[0, 0], [1, 0]])];
    let gram: Vec<Vec<Rational>> = basis.iter().map(|x| basis.iter().map(|y| tr(&mmul(x, y))).collect()).collect();
    // dual basis: e <-> f, h <-> h/2 with respect to tr(xy)
    let half = Rational::new(1.into(), 2.into());
    let dual: Vec<M2> = vec![basis[2].clone(), basis[1].clone().map(|r| r.map(|x| x * &half)), basis[0].clone()];
    for (i, d) in dual.iter().enumerate() {
        for (j, x) in basis.iter().enumerate() {
            let want = if i == j { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) };
            assert_eq!(tr(&mmul(d, x)), want, "dual basis");
        }
    }
    assert_eq!(gram[1][1], Rational::from_integer(2.into()));
    // Casimir sum_a ad(x_a) ad(x^a) on e is 2 h e
    let e = &basis[0];
    let mut cas = m2([[0, 0], [0, 0]]);
    for (x, d) in basis.iter().zip(&dual) {
        let t = comm(x, &comm(d, e));
        for i in 0..2 {
            for j in 0..2 {
                cas[i][j] += &t[i][j];
            }
        }
    }
    let two_h = cas[0][1].clone();
    (basis.len(), two_h / Rational::from_integer(2.into()))
}

fn conformal_charges() -> Outcome {
    let heis = presets::preset("heisenberg").unwrap();
    let w = heis.conformal_vector().unwrap().clone();
    let c_heis = s("1 - 12*lambda^2");
    check(heis.central_charge() == Some(&c_heis), || format!("c = {:?}", heis.central_charge()))?;
    let l2 = heis.virasoro_mode(2, &w).unwrap();
    check(l2 == State::vacuum().scale(&(&c_heis * &s("1/2"))), || heis.render(&l2))?;

    let (dim, hv) = sugawara_oracle();
    check(hv == Rational::from_integer(2.into()), || format!("dual Coxeter {hv}"))?;
    let k = Scalar::param("k");
    let c = (&k * &Scalar::from_int(dim as i64)).checked_div(&(&k + &Scalar::from_rational(hv))).unwrap();
    let aff = presets::affine(&LieData::sl2(), Scalar::param("k"));
    let w = aff.conformal_vector().unwrap().clone();
    let l2 = aff.virasoro_mode(2, &w).unwrap();
    let want = State::vacuum().scale(&(&c * &s("1/2")));
    check(l2 == want, || format!("L_2 w = {}", aff.render(&l2)))?;
    Ok(format!("c = 1 - 12 lambda^2; sl2 Sugawara L_2 w = ({}) |0>", &c * &s("1/2")))
}

fn critical_center() -> Outcome {
    let t = Instant::now();
    let generic = presets::affine(&LieData::sl2(), Scalar::param("k"));
    let dims: Vec<usize> = (1..=3).map(|d| center(generic.va(), h(d)).len()).collect();
    check(dims == vec![0, 0, 0], || format!("generic dims {dims:?}"))?;
    let crit = presets::affine(&LieData::sl2(), Scalar::from_int(-2));
    let z = center(crit.va(), h(2)).len();
    check(z == 1, || format!("critical degree-2 dim {z}"))?;
    let dt = t.elapsed();
    check(dt < CENTER_BUDGET, || format!("took {dt:?}"))?;
    Ok(format!("generic dims 0,0,0 in degrees 1..3; dim 1 at k = -2 ({dt:.1?})"))
}

fn matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let rest: Vec<usize> = items[1..].iter().copied().filter(|&x| x != items[i]).collect();
        for mut m in matchings(&rest) {
            m.push((first, items[i]));
            out.push(m);
        }
    }
    out
}

fn double_factorial(n: usize) -> usize {
    (1..=n).rev().step_by(2).product()
}

fn correlators() -> Outcome {
    for n in [2, 4, 6] {
        let f = heisenberg_npoint(&State::vacuum(), n).map_err(|e| e.to_string())?;
        let vars: Vec<usize> = (1..=n).collect();
        let ms = matchings(&vars);
        check(ms.len() == double_factorial(n - 1), || format!("{} matchings for n = {n}", ms.len()))?;
        let mut expected = RationalCorrelator::zero(vars.clone());
        for m in &ms {
            let poles = m.iter().map(|&p| (p, 2)).collect();
            expected = expected.add(&RationalCorrelator::from_term(vars.clone(), Poly::one(), poles));
        }
        check(f == expected && f.terms.len() == ms.len(), || format!("n = {n}: {}", f.render()))?;
    }
    let boot = bootstrap_verify(&State::vacuum(), NPOINT_MAX).map_err(|e| e.to_string())?;
    check(boot.passed, || format!("{:?}", boot.witness))?;
    let heis = presets::heisenberg(Scalar::zero());
    let b = heis.parse("b(-1) |0>").unwrap();
    let mut checks = 0;
    let mut coefficients = 0;
    for phi in basis_states(&heis, REGION_FUNCTIONAL_DEGREE) {
        for n in 1..=REGION_MAX {
            let r = consistency_check(heis.va(), &vec![b.clone(); n], &phi, &[], REGION_RADIUS)
                .map_err(|e| e.to_string())?;
            check(r.passed, || format!("phi = {}, n = {n}: {:?}", heis.render(&phi), r.witness))?;
            checks += 1;
            coefficients += r.coefficients;
        }
    }
    Ok(format!(
        "pairing sums for n = 2,4,6; recursion to n = {NPOINT_MAX} ({} cases); {checks} region checks, {coefficients} coefficients",
        boot.cases
    ))
}

fn ints(q: &QSeries) -> Vec<i64> {
    q.integer_coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
}

fn partitions(n: i64, min: i64) -> i64 {
    if n == 0 {
        return 1;
    }
    (min..=n).map(|p| partitions(n - p, p)).sum()
}

fn characters() -> Outcome {
    let p = ParamPoint::new()
        .with("lambda", Rational::from_integer(0.into()))
        .with("c", Rational::new(1.into(), 2.into()));
    let heis = presets::preset("heisenberg").unwrap();
    let ch = character(&heis, 0, h(CHARACTER_CUTOFF), &p).map_err(|e| e.to_string())?;
    let want: Vec<i64> = (0..=CHARACTER_CUTOFF).map(|n| partitions(n, 1)).collect();
    check(ints(&ch) == want, || format!("Heisenberg {ch}"))?;
    let vir = presets::preset("virasoro").unwrap();
    let ch = character(&vir, 0, h(CHARACTER_CUTOFF), &p).map_err(|e| e.to_string())?;
    let want: Vec<i64> = (0..=CHARACTER_CUTOFF).map(|n| partitions(n, 2)).collect();
    check(ints(&ch) == want, || format!("Virasoro {ch}"))?;
    for n in 1..=3 {
        let inst = presets::lattice(n).unwrap();
        let cutoff = h(CHARACTER_CUTOFF / 2);
        let mut total: Option<QSeries> = None;
        for sec in inst.fock().sectors_up_to(cutoff) {
            let ch = character(&inst, sec, cutoff - inst.fock().sector_energy(sec), &p).map_err(|e| e.to_string())?;
            total = Some(match total {
                None => ch,
                Some(t) => t.add(&ch).map_err(|e| e.to_string())?,
            });
        }
        let total = total.unwrap();
        check(total == lattice_theta_character(n, cutoff), || format!("lattice {n}: {total}"))?;
    }
    let bf = boson_fermion_character_check(BF_DOUBLED_CUTOFF).map_err(|e| e.to_string())?;
    check(bf.passed, || format!("{:?}", bf.rows))?;
    Ok(format!(
        "partitions and parts >= 2 to q^{CHARACTER_CUTOFF}; theta = sector sum for N <= 3; boson-fermion dims to doubled degree {BF_DOUBLED_CUTOFF}"
    ))
}

fn coordinates() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: ROUNDTRIP_CASES,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        failure_persistence: None,
        ..Config::default()
    });
    let coeff = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::from_ratio(n, d));
    let series = (1usize..=6).prop_flat_map(move |m| proptest::collection::vec(coeff.clone(), m));
    runner
        .run(&series, |mut cs| {
            if cs[0].is_zero() {
                cs[0] = Scalar::one();
            }
            let rho = CoordChange::new(cs).unwrap();
            prop_assert_eq!(rho.decompose().reconstruct().unwrap(), rho);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;

    let scaling = CoordChange::parse("a").unwrap();
    let near_identity = CoordChange::parse("1, e").unwrap();
    let first = Truncation::FirstOrder("e".into());
    let mut count = 0;
    for name in ["heisenberg", "virasoro"] {
        let inst = presets::preset(name).unwrap();
        for v in basis_states(&inst, COORD_DEGREE) {
            for (rho, trunc) in [(&scaling, &Truncation::Exact), (&near_identity, &first)] {
                let r = huang_check(&inst, &v, rho, h(COORD_DEGREE), trunc).map_err(|e| e.to_string())?;
                check(r.passed, || format!("{name}, {}: {}", inst.render(&v), r.summary()))?;
                count += 1;
            }
        }
    }
    let heis = presets::heisenberg(Scalar::zero());
    let aff = presets::affine(&LieData::sl2(), Scalar::param("k"));
    let primaries = [
        (&heis, heis.parse("b(-1) |0>").unwrap()),
        (&aff, aff.parse("e(-1) v_k").unwrap()),
        (&aff, aff.parse("h(-1) v_k").unwrap()),
        (&aff, aff.parse("f(-1) v_k").unwrap()),
    ];
    for (inst, v) in &primaries {
        for (rho, trunc) in [(&scaling, &Truncation::Exact), (&near_identity, &first)] {
            let r = primary_differential_check(inst, v, rho, h(COORD_DEGREE - 1), trunc).map_err(|e| e.to_string())?;
            check(r.passed, || format!("{}: {}", inst.render(v), r.summary()))?;
        }
    }
    Ok(format!(
        "{ROUNDTRIP_CASES} random round trips; {count} transformation checks to degree {COORD_DEGREE}; 4 primaries"
    ))
}

const CLI_CORPUS: &[&[&str]] = &[
    &["verify", "--algebra", "heisenberg", "--degree", "4"],
    &["--json", "verify", "--algebra", "lattice:1", "--degree", "3"],
    &["ope", "--algebra", "virasoro", "--a", "L(-2)|0>", "--b", "L(-2)|0>"],
    &["--json", "ope", "--algebra", "affine:sl2", "--a", "e(-1)v_k", "--b", "f(-1)v_k"],
    &["bracket", "--algebra", "virasoro", "--a", "L(-2)|0>", "--b", "L(-2)|0>", "--m", "2", "--n", "-2"],
    &["character", "--algebra", "heisenberg", "--lambda", "0", "--cutoff", "6"],
    &["character", "--algebra", "lattice:2", "--cutoff", "4", "--all-sectors"],
    &["npoint", "--n", "4"],
    &["--json", "npoint", "--algebra", "fermion", "--states", "psi(-1)|0>; psi*(0)|0>"],
    &["center", "--algebra", "affine:sl2", "--param", "k=-2", "--degree", "2"],
    &["coset", "--algebra", "heisenberg", "--states", "|0>", "--degree", "2"],
    &["coord-check", "--algebra", "virasoro", "--rho", "a", "--degree", "3"],
    &["bf-check", "--degree", "2"],
];

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_vertex");
    for args in CLI_CORPUS {
        let run = || Command::new(exe).args(*args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        check(a.status.success(), || format!("{args:?} exited with {:?}", a.status.code()))?;
        check(a.stdout == b.stdout && a.stderr == b.stderr, || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} invocations byte-identical across two runs", CLI_CORPUS.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("axiom suites", axiom_suites),
        ("conformal OPE table", conformal_ope),
        ("commutator regeneration", commutator_regeneration),
        ("conformal charges", conformal_charges),
        ("center at critical level", critical_center),
        ("correlators", correlators),
        ("characters", characters),
        ("coordinate action", coordinates),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({dt:.1?}): {detail}", i + 1),
            Err(w) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({dt:.1?}): {w}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
