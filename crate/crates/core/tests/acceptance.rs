//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion does.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lagbasis::hamiltonian::{coulomb_hamiltonian, solve_spectrum};
use lagbasis::matrix_elements::{me_exact, me_general, me_same_l};
use lagbasis::radial_basis::{BasisIndex, LengthScale, RadialFunction};
use lagbasis::shift_ops::{expand_l_plus_1, expand_l_plus_2, shift_spec, verify_shift_with, ShiftKind, ShiftOperatorSpec};
use lagbasis::su11::{expand_action, ladder_coeffs, ladder_matrices, verify_commutators, ActionOp};
use lagbasis::tensor_me::{reduced_me_gradient, reduced_me_laplacian, GradientForm, LaplacianForm};
use lagbasis::verification::{sweep, TableOp};
use lagbasis::{Error, OperatorTag, Surd};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{rngs::StdRng, Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const B1: LengthScale = LengthScale::UNIT;

fn idx(n: u32, l: u32) -> BasisIndex {
    BasisIndex::new(n, l)
}

fn table_oracle_equivalence() -> Outcome {
    let scales: Vec<LengthScale> = [0.5, 1.0, 2.0].iter().map(|&b| LengthScale::new(b).unwrap()).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let report = pool.install(|| sweep(&TableOp::all(), 20, 5, &scales)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.passes(1e-10), || format!("max deviation {:e} at {:?}", report.max_deviation, report.worst))?;
    ensure(elapsed < Duration::from_secs(60), || format!("single-threaded sweep took {elapsed:?}"))?;
    Ok(format!("{} elements, max deviation {:.2e}, {:.1?} on one thread", report.checked, report.max_deviation, elapsed))
}

fn spot_values() -> Outcome {
    let checks = [
        ("<00|r|00>", me_general(OperatorTag::R, idx(0, 0), idx(0, 0), B1), 1.5),
        ("<10|1/r|00>", me_general(OperatorTag::RInv, idx(1, 0), idx(0, 0), B1), (1.0f64 / 3.0).sqrt()),
        ("<00|01>", me_general(OperatorTag::Overlap, idx(0, 0), idx(0, 1), B1), 3f64.sqrt() / 2.0),
        ("<10|01>", me_general(OperatorTag::Overlap, idx(1, 0), idx(0, 1), B1), -0.5),
        ("<20|02>", me_general(OperatorTag::Overlap, idx(2, 0), idx(0, 2), B1), (1.0f64 / 15.0).sqrt()),
        ("<01||grad||00>", Ok(reduced_me_gradient(idx(0, 1), idx(0, 0), B1, GradientForm::Corrected)), -0.5),
        ("<00||lap||00>", Ok(reduced_me_laplacian(0, 0, 0, B1, LaplacianForm::Assembled)), -1.0),
    ];
    for (name, got, want) in &checks {
        let got = got.as_ref().map_err(|e| format!("{name}: {e}"))?;
        ensure((got - want).abs() <= 1e-12, || format!("{name} = {got}, expected {want}"))?;
    }
    let grad = TableOp::Gradient.exact(idx(0, 1), idx(0, 0)).map_err(|e| e.to_string())?;
    ensure(grad.to_string() == "-1/2*sqrt(1/1)", || format!("exact gradient element {grad}"))?;
    Ok(format!("{} values within 1e-12", checks.len()))
}

fn surd(p: i64, q: i64, rad: i64) -> Surd {
    Surd::new(BigRational::new(BigInt::from(p), BigInt::from(q)), BigRational::from_integer(BigInt::from(rad))).unwrap()
}

fn algebra_suite() -> Outcome {
    let mut worst_comm: f64 = 0.0;
    for l in 0..=5 {
        worst_comm = worst_comm.max(verify_commutators(l, 20).max());
    }
    ensure(worst_comm <= 1e-12, || format!("commutator/Casimir residual {worst_comm:e}"))?;

    // r = (2T3 - T+ - T-)/2 and r d/dr = (T+ - T- - 1)/2, entry by entry.
    for l in 0..=5u32 {
        let (t3, tp, tm) = ladder_matrices(l, 20);
        for p in 0..=20u32 {
            for n in 0..=20u32 {
                let (i, j) = (p as usize, n as usize);
                let r = 0.5 * (2.0 * t3[(i, j)] - tp[(i, j)] - tm[(i, j)]);
                let rd = 0.5 * (tp[(i, j)] - tm[(i, j)] - if i == j { 1.0 } else { 0.0 });
                let got_r = me_same_l(OperatorTag::R, p, n, l, B1).map_err(|e| e.to_string())?;
                let got_rd = me_same_l(OperatorTag::RDdr, p, n, l, B1).map_err(|e| e.to_string())?;
                ensure(got_r == r && got_rd == rd, || format!("l={l} ({p},{n}): r {got_r} vs {r}, r d/dr {got_rd} vs {rd}"))?;

                // The same identity in exact arithmetic.
                let exact = me_exact(OperatorTag::R, idx(p, l), idx(n, l)).map_err(|e| e.to_string())?;
                let want = if p == n {
                    Surd::rational(BigRational::new(BigInt::from(2 * (n + l) + 3), BigInt::from(2)))
                } else if p == n + 1 {
                    surd(-1, 2, ((n + 1) * (n + 2 * l + 3)) as i64)
                } else if p + 1 == n {
                    surd(-1, 2, (n * (n + 2 * l + 2)) as i64)
                } else {
                    Surd::zero()
                };
                ensure(exact == want, || format!("exact r l={l} ({p},{n}): {exact} vs {want}"))?;
            }
        }
    }

    // Three-term recurrence for 1/r: T3 f_n - T- f_(n-1)/2 - T+ f_(n+1)/2 = delta.
    let mut worst_rec: f64 = 0.0;
    for l in 0..=5 {
        let f = |n: u32, m: u32| expand_action(ActionOp::RInv, idx(n, l), 25).coeff(m, l);
        for n in 0..=20u32 {
            let c = ladder_coeffs(idx(n, l));
            for m in 0..=20u32 {
                let below = if n > 0 { f(n - 1, m) } else { 0.0 };
                let res = c.t3 * f(n, m) - 0.5 * c.t_minus * below - 0.5 * c.t_plus * f(n + 1, m);
                let want = if n == m { 1.0 } else { 0.0 };
                worst_rec = worst_rec.max((res - want).abs());
            }
        }
    }
    ensure(worst_rec <= 1e-12, || format!("1/r recurrence residual {worst_rec:e}"))?;

    let mut worst_anti: f64 = 0.0;
    for l in 0..=5 {
        for p in 0..=20 {
            for n in 0..=20 {
                let a = me_same_l(OperatorTag::RDdr, p, n, l, B1).unwrap();
                let at = me_same_l(OperatorTag::RDdr, n, p, l, B1).unwrap();
                let id = if p == n { 1.0 } else { 0.0 };
                worst_anti = worst_anti.max((a + at + id).abs());
            }
        }
    }
    ensure(worst_anti == 0.0, || format!("M(r d/dr) + M^T + I residual {worst_anti:e}"))?;
    Ok(format!("commutators {worst_comm:.1e}, recurrence {worst_rec:.1e}, r and r d/dr exact"))
}

fn shift_suite() -> Outcome {
    let mut worst_norm: f64 = 0.0;
    for l in 0..=4 {
        for n in 0..=15 {
            for e in [expand_l_plus_1(n, l), expand_l_plus_2(n, l)] {
                worst_norm = worst_norm.max((e.norm_squared().sqrt() - 1.0).abs());
            }
        }
    }
    ensure(worst_norm <= 1e-12, || format!("expansion norm off by {worst_norm:e}"))?;

    let grid: Vec<f64> = (1..=400).map(|k| 0.05 * k as f64).collect();
    let mut worst_point: f64 = 0.0;
    for l in 0..=4 {
        for n in 1..=15 {
            for kind in [ShiftKind::A, ShiftKind::ADagger] {
                worst_point = worst_point.max(verify_shift_with(kind, n, l, &grid).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure(worst_point <= 1e-9, || format!("pointwise shift residual {worst_point:e}"))?;

    // The bottom of each family is annihilated.
    let mut worst_zero: f64 = 0.0;
    for l in 0..=4 {
        ensure(matches!(shift_spec(0, l, ShiftKind::A), Err(Error::Annihilated { .. })), || format!("A_0{l} accepted"))?;
        let bare = ShiftOperatorSpec {
            n: 0,
            l,
            kind: ShiftKind::A,
            prefactor: 1.0,
            derivative_coeff: 1.0,
            inverse_r_coeff: -(l as f64 + 1.0),
            constant_coeff: 1.0,
        };
        let image = bare.apply(&RadialFunction::basis(idx(0, l), B1));
        for &r in &grid {
            worst_zero = worst_zero.max(image.eval(r).abs());
        }
    }
    ensure(worst_zero <= 1e-12, || format!("A_0l S_0l = {worst_zero:e}"))?;
    Ok(format!("norm {worst_norm:.1e}, pointwise {worst_point:.1e}, annihilation {worst_zero:.1e}"))
}

fn hydrogen_spectrum() -> Outcome {
    let start = Instant::now();
    let mut worst_ground: f64 = 0.0;
    for n_max in 0..=40 {
        let h = coulomb_hamiltonian(1.0, B1, 0, n_max).map_err(|e| e.to_string())?;
        let ev = solve_spectrum(&h, 1).map_err(|e| e.to_string())?;
        worst_ground = worst_ground.max((ev[0] + 0.5).abs());
    }
    ensure(worst_ground <= 1e-12, || format!("ground state off by {worst_ground:e}"))?;
    let s = solve_spectrum(&coulomb_hamiltonian(1.0, B1, 0, 40).unwrap(), 2).map_err(|e| e.to_string())?;
    ensure((s[1] + 0.125).abs() <= 1e-6, || format!("2s level {}", s[1]))?;
    let p = solve_spectrum(&coulomb_hamiltonian(1.0, B1, 1, 40).unwrap(), 1).map_err(|e| e.to_string())?;
    ensure((p[0] + 0.125).abs() <= 1e-6, || format!("2p level {}", p[0]))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("1s {worst_ground:.1e}, 2s {:.1e}, 2p {:.1e}, {elapsed:.1?}", s[1] + 0.125, p[0] + 0.125))
}

fn laplacian_sign_regression() -> Outcome {
    let mut worst_assembled: f64 = 0.0;
    let mut worst_printed: f64 = 0.0;
    let mut offdiag_mismatch = 0;
    let mut offdiag = 0;
    for l in 0..=4 {
        for p in 0..=10 {
            for n in 0..=10 {
                let oracle = TableOp::Laplacian.oracle(idx(p, l), idx(n, l), B1).map_err(|e| e.to_string())?;
                let a = reduced_me_laplacian(p, n, l, B1, LaplacianForm::Assembled);
                let pr = reduced_me_laplacian(p, n, l, B1, LaplacianForm::Printed);
                worst_assembled = worst_assembled.max((a - oracle).abs() / (1.0 + a.abs()));
                if p != n {
                    offdiag += 1;
                    if (pr - oracle).abs() > 1e-8 * (1.0 + oracle.abs()) {
                        offdiag_mismatch += 1;
                    }
                } else {
                    worst_printed = worst_printed.max((pr - oracle).abs());
                }
            }
        }
    }
    ensure(worst_assembled <= 1e-10, || format!("assembled laplacian deviates by {worst_assembled:e}"))?;
    ensure(worst_printed <= 1e-10, || format!("diagonal printed form deviates by {worst_printed:e}"))?;
    ensure(offdiag_mismatch == offdiag, || {
        format!("printed off-diagonal form agreed with quadrature in {} of {offdiag} cases", offdiag - offdiag_mismatch)
    })?;
    let a = reduced_me_laplacian(0, 1, 0, B1, LaplacianForm::Assembled);
    let pr = reduced_me_laplacian(0, 1, 0, B1, LaplacianForm::Printed);
    Ok(format!(
        "assembled form matches quadrature ({worst_assembled:.1e}); opposite off-diagonal sign rejected in {offdiag_mismatch}/{offdiag} cases, e.g. <00||lap||10> = {a} not {pr}"
    ))
}

fn surd_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let p: i64 = rng.gen_range(-10_000..=10_000);
        let q: i64 = rng.gen_range(1..=10_000);
        let r: i64 = rng.gen_range(0..=100_000);
        let s: i64 = rng.gen_range(1..=100_000);
        let x = Surd::new(BigRational::new(BigInt::from(p), BigInt::from(q)), BigRational::new(BigInt::from(r), BigInt::from(s)))
            .map_err(|e| e.to_string())?;
        let text = x.to_string();
        let back: Surd = text.parse().map_err(|e: Error| format!("{text}: {e}"))?;
        ensure(back == x, || format!("{text} parsed as {back}"))?;
        let want = p as f64 / q as f64 * (r as f64 / s as f64).sqrt();
        let dev = (back.to_f64() - want).abs() / want.abs().max(1.0);
        worst = worst.max(dev);
        ensure(dev <= 1e-13, || format!("{text} = {} but expected {want}", back.to_f64()))?;
    }
    Ok(format!("500 renderings, max relative deviation {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("table-oracle equivalence", table_oracle_equivalence),
        ("spot values", spot_values),
        ("ladder algebra", algebra_suite),
        ("shift operators", shift_suite),
        ("hydrogen spectrum", hydrogen_spectrum),
        ("laplacian sign regression", laplacian_sign_regression),
        ("exact surd round trip", surd_round_trip),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
