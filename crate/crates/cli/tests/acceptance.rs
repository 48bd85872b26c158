//! Acceptance suite. Runs every criterion, prints one line per criterion
//! (with indented sub-checks) and exits non-zero unless the failing
//! sub-checks are exactly the documented expected failures.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use jetsplit::algebra::PMonomial;
use jetsplit::composition::Step;
use jetsplit::lifting::{lifted_adaptive, lifted_rk4, FullRk4, HamiltonianBase};
use jetsplit::subflows::{
    vdp_a, vdp_b, vdp_c, AffineU, BernoulliB, BernoulliT, Drift, Forcing, Harmonic, Kick,
    PolyField, QuadU, ReebScaling, Slot,
};
use jetsplit::{
    chebyshev_surrogate, depth_one_decompose, euler_operator, jacobi_bracket, lower_degree,
    parse_hamiltonian, poisson_bracket, raise_degree, reference_contact_flow, run_trajectory,
    scale_by, verify_contactomorphism, BigRational, Coeff, ContactStep, FloatHamiltonian, Gadget,
    GadgetKind, Hamiltonian, JetPoint, PolyPHamiltonian, ProlongedRealization, RationalHamiltonian,
    Scalar, Scheme, Tolerance, XUPolynomial,
};
use jetsplit_lab::bracket_check::{default_eps, up2_bracket_check};
use jetsplit_lab::config::{ExperimentConfig, Scenario};
use jetsplit_lab::convergence::{log_sweep, ErrorNorm, Sweep};
use jetsplit_lab::dho::{dho_diagnostics, dho_step, run_dho};
use jetsplit_lab::diagnostics::{jacobian_discrepancy, random_states};
use jetsplit_lab::double_well::{double_well_convergence, double_well_step, DwSplitting};
use jetsplit_lab::systems::{dho_hamiltonian, Vdp, VdpBase};
use jetsplit_lab::universal::Universal;
use jetsplit_lab::vdp::{run_vdp, vdp_convergence, vdp_method_step, VdpMethod};
use jetsplit_lab::SlopeExpectation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Vec<Check>, String>;

/// Sub-checks allowed to fail, as `(criterion, check)`.
const EXPECTED_FAILURES: &[(u32, &str)] = &[(9, "regular-case boundedness")];

const SUITE_BUDGET: Duration = Duration::from_secs(300);

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn slope_check(name: &str, slope: f64, want: SlopeExpectation) -> Check {
    check(
        name,
        want.holds(slope),
        format!("slope {slope:.3}, want {want}"),
    )
}

fn within(target: f64, tol: f64) -> SlopeExpectation {
    SlopeExpectation::Within { target, tol }
}

fn kind_name(kind: GadgetKind) -> &'static str {
    match kind {
        GadgetKind::Basic => "basic",
        GadgetKind::Symmetric { .. } => "symmetric",
        GadgetKind::Yoshida { .. } => "Yoshida",
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Random polynomial Hamiltonians.

type Term = (i64, i64, Vec<u32>, u32, Vec<u32>);

fn random_terms(rng: &mut ChaCha8Rng, n: usize, p_deg: u32) -> Vec<Term> {
    let count = rng.random_range(0..5);
    (0..count)
        .map(|_| {
            let num = rng.random_range(-6..=6);
            let den = rng.random_range(1..=4);
            let x = (0..n).map(|_| rng.random_range(0..=2)).collect();
            let u = rng.random_range(0..=2);
            let alpha = loop {
                let a: Vec<u32> = (0..n).map(|_| rng.random_range(0..=p_deg)).collect();
                if a.iter().sum::<u32>() <= p_deg {
                    break a;
                }
            };
            (num, den, x, u, alpha)
        })
        .collect()
}

fn build<C: Coeff>(n: usize, terms: &[Term]) -> PolyPHamiltonian<C> {
    let mut h = PolyPHamiltonian::zero(n);
    for (num, den, x, u, alpha) in terms {
        let c = C::from_int(*num) / C::from_int(*den);
        h = &h + &PolyPHamiltonian::monomial(c, x.clone(), *u, alpha.clone());
    }
    h
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rh(s: &str, n: usize) -> RationalHamiltonian {
    parse_hamiltonian(s, Some(n)).unwrap()
}

fn fh(s: &str) -> FloatHamiltonian {
    s.parse().unwrap()
}

/// Tallies an identity over many random cases.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    fn exact(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn within(&mut self, value: f64, tol: f64) {
        self.cases += 1;
        self.worst = self.worst.max(value);
        if value.is_nan() || value > tol {
            self.failures += 1;
        }
    }

    fn finish(self) -> Check {
        let detail = if self.worst > 0.0 {
            format!(
                "{}/{} hold, worst {:.2e}",
                self.cases - self.failures,
                self.cases,
                self.worst
            )
        } else {
            format!("{}/{} hold", self.cases - self.failures, self.cases)
        };
        check(self.name, self.failures == 0 && self.cases > 0, detail)
    }
}

// ---------------------------------------------------------------------------
// 1. Bracket algebra.

fn algebra_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut anti = Tally::new("antisymmetry (exact)");
    let mut jacobi = Tally::new("Jacobi identity (exact)");
    let mut filtration = Tally::new("degree filtration");
    let mut poisson = Tally::new("Poisson degree drop");
    let mut euler = Tally::new("Euler operator clauses");
    let mut float_bracket = Tally::new("float bracket vs exact");
    let mut float_anti = Tally::new("float antisymmetry");
    let mut float_jacobi = Tally::new("float Jacobi identity");
    for _ in 0..200 {
        let n = rng.random_range(1..=2);
        let terms: Vec<Vec<Term>> = (0..3).map(|_| random_terms(&mut rng, n, 3)).collect();
        let [f, g, h]: [RationalHamiltonian; 3] = std::array::from_fn(|i| build(n, &terms[i]));
        let [ff, gf, hf]: [FloatHamiltonian; 3] = std::array::from_fn(|i| build(n, &terms[i]));

        let fg = jacobi_bracket(&f, &g);
        anti.exact((&fg + &jacobi_bracket(&g, &f)).is_zero() && jacobi_bracket(&f, &f).is_zero());
        let cyc = &(&jacobi_bracket(&f, &jacobi_bracket(&g, &h))
            + &jacobi_bracket(&g, &jacobi_bracket(&h, &f)))
            + &jacobi_bracket(&h, &fg);
        jacobi.exact(cyc.is_zero());
        filtration.exact(fg.is_zero() || fg.degree() <= f.degree() + g.degree());
        let pb = poisson_bracket(&f, &g);
        poisson.exact(
            (&pb + &poisson_bracket(&g, &f)).is_zero()
                && (pb.is_zero() || pb.degree() < f.degree() + g.degree()),
        );

        let (a, b) = (
            q(rng.random_range(-5..=5), 1),
            q(rng.random_range(-5..=5), 2),
        );
        let linear = euler_operator(&(&f.scale(&a) + &g.scale(&b)))
            == &euler_operator(&f).scale(&a) + &euler_operator(&g).scale(&b);
        let graded = (0..=3).all(|k| {
            let fk = f.homogeneous(k);
            euler_operator(&fk) == fk.scale(&BigRational::from_int(1 - k as i64))
        });
        euler.exact(linear && graded && euler_operator(&f.homogeneous(1)).is_zero());

        let fgf = jacobi_bracket(&ff, &gf);
        float_bracket.within(fgf.max_coeff_diff(&fg.to_float()), 1e-12);
        float_anti.within(
            (&fgf + &jacobi_bracket(&gf, &ff)).max_coeff_diff(&FloatHamiltonian::zero(n)),
            1e-12,
        );
        let cycf = &(&jacobi_bracket(&ff, &jacobi_bracket(&gf, &hf))
            + &jacobi_bracket(&gf, &jacobi_bracket(&hf, &ff)))
            + &jacobi_bracket(&hf, &fgf);
        float_jacobi.within(cycf.max_coeff_diff(&FloatHamiltonian::zero(n)), 1e-12);
    }
    Ok([
        anti,
        jacobi,
        filtration,
        poisson,
        euler,
        float_bracket,
        float_anti,
        float_jacobi,
    ]
    .into_iter()
    .map(Tally::finish)
    .collect())
}

// ---------------------------------------------------------------------------
// 2. Bracket-operator constructions.

fn lemma_constructions() -> Outcome {
    let mono = |c: BigRational, alpha: &[u32]| PMonomial::new(c, alpha.to_vec());
    let generated = |name: &str,
                     g: RationalHamiltonian,
                     want_g: &str,
                     target: &PMonomial<BigRational>,
                     want: &str,
                     n| {
        let bracket = jacobi_bracket(&g, &target.to_poly());
        let ok = g == rh(want_g, n) && bracket == rh(want, n);
        check(
            name,
            ok,
            format!("g = {g}, [g, {}] = {bracket}", target.to_poly()),
        )
    };
    let mut out = Vec::new();

    let t = mono(q(1, 1), &[2]);
    out.push(generated(
        "raise p²",
        raise_degree(&t, 0).map_err(err)?,
        "-u*p",
        &t,
        "p^3",
        1,
    ));
    let t = mono(q(2, 1), &[3]);
    out.push(generated(
        "raise 2p³",
        raise_degree(&t, 0).map_err(err)?,
        "-u*p/2",
        &t,
        "2*p^4",
        1,
    ));
    let t = mono(q(1, 1), &[1, 1]);
    out.push(generated(
        "raise p₁p₂ along p₂",
        raise_degree(&t, 1).map_err(err)?,
        "-u*p2",
        &t,
        "p1*p2^2",
        2,
    ));

    let t = mono(q(1, 1), &[2]);
    out.push(generated(
        "lower p²",
        lower_degree(&t, 0).map_err(err)?,
        "-x/2",
        &t,
        "p",
        1,
    ));
    let t = mono(q(3, 1), &[1]);
    out.push(generated(
        "lower 3p",
        lower_degree(&t, 0).map_err(err)?,
        "-x",
        &t,
        "3",
        1,
    ));
    let t = mono(q(1, 1), &[2, 1]);
    out.push(generated(
        "lower p₁²p₂ along p₁",
        lower_degree(&t, 0).map_err(err)?,
        "-x1/2",
        &t,
        "p1*p2",
        2,
    ));

    let t = mono(q(1, 1), &[2]);
    for (h, want_g, want_r, want) in [
        (XUPolynomial::u(1), "-u^2/2", "0", "u*p^2"),
        (XUPolynomial::x(1, 0), "-x*u", "2*u*p", "x*p^2 + 2*u*p"),
        (XUPolynomial::constant(1, q(1, 1)), "-u", "0", "p^2"),
    ] {
        let (g, r) = scale_by(&t, &h).map_err(err)?;
        let bracket = jacobi_bracket(&g, &t.to_poly());
        let leading = PolyPHamiltonian::from_term(vec![2], h.clone());
        let ok = g == rh(want_g, 1)
            && r == rh(want_r, 1)
            && bracket == rh(want, 1)
            && bracket == &leading + &r;
        out.push(check(
            format!("scale p² by {}", PolyPHamiltonian::from_base(h)),
            ok,
            format!("g = {g}, remainder = {r}"),
        ));
    }

    let key = jacobi_bracket(&rh("-u^2/2", 1), &rh("p^2", 1));
    out.push(check(
        "up² = [−u²/2, p²]",
        key == rh("u*p^2", 1),
        format!("[−u²/2, p²] = {key}"),
    ));

    let rejects = raise_degree(&mono(q(1, 1), &[1]), 0).is_err()
        && lower_degree(&mono(q(1, 1), &[0, 2]), 0).is_err()
        && scale_by(&mono(q(1, 1), &[1]), &XUPolynomial::u(1)).is_err();
    out.push(check(
        "preconditions",
        rejects,
        "degenerate targets rejected",
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// 3. Decomposition.

fn decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut exact = Tally::new("100 random degree-≤4 reconstructions");
    for _ in 0..100 {
        let n = rng.random_range(1..=2);
        let h: RationalHamiltonian = build(n, &random_terms(&mut rng, n, 4));
        let rep = depth_one_decompose(&h);
        exact.exact(rep.is_well_formed() && rep.reconstruct() == h);
    }
    let mut out = vec![exact.finish()];
    let sweep = Sweep {
        z0: JetPoint::scalar(0.5, 0.2, 0.5),
        t0: 0.0,
        span: 1.0,
        hs: log_sweep(-1.0, -3.0, 8),
        norm: ErrorNorm::Endpoint,
    };
    for (kind, want) in [
        (GadgetKind::Basic, within(0.5, 0.2)),
        (GadgetKind::symmetric(), within(1.0, 0.2)),
    ] {
        let u = Universal::new("x*p^2", 2, kind, ProlongedRealization::ExactIfAvailable)
            .map_err(err)?;
        let table = u.convergence(&sweep).map_err(err)?;
        out.push(slope_check(
            &format!("x·p² universal scheme, {} gadget", kind_name(kind)),
            table.fitted_slope,
            want,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// 4. Contactness.

fn field(s: &str, slot: Slot) -> PolyField {
    PolyField::new(fh(s), slot).unwrap()
}

/// Exact subflows with their generating Hamiltonians.
fn exact_flows() -> Vec<(Step, FloatHamiltonian)> {
    vec![
        (
            Arc::new(Drift::new(field("0.5*p^2 + 0.1*p^4", Slot::Momentum))),
            fh("0.5*p^2 + 0.1*p^4"),
        ),
        (
            Arc::new(Kick::new(field("(x^2-1)^2", Slot::Position))),
            fh("(x^2-1)^2"),
        ),
        (Arc::new(Harmonic), fh("0.5*p^2 + 0.5*x^2")),
        (Arc::new(ReebScaling { gamma: 0.3 }), fh("0.3*u")),
        (
            Arc::new(QuadU {
                c: field("-0.5 + 0.2*x", Slot::Position),
            }),
            fh("(-0.5 + 0.2*x)*u^2"),
        ),
        (
            Arc::new(AffineU {
                a: field("x^2", Slot::Position),
                b: field("0.5 - x", Slot::Position),
            }),
            fh("x^2 + (0.5 - x)*u"),
        ),
        (Arc::new(vdp_c()), fh("u*p")),
        (Arc::new(vdp_a(5.0)), fh("-5*(1 - x^2)*u")),
        (Arc::new(vdp_b()), fh("-0.5*x^2")),
        (Arc::new(BernoulliB { sigma: 0.7 }), fh("0.7*u*p^2")),
        (
            Arc::new(BernoulliT::new(-0.4).unwrap()),
            fh("0.5*(1 - 0.8*u)*p^2"),
        ),
    ]
}

fn exact_substep_schemes() -> Result<Vec<Step>, String> {
    let flows: Vec<Step> = exact_flows().into_iter().map(|(f, _)| f).collect();
    let mut out: Vec<Step> = vec![
        Arc::new(Scheme::lie_trotter(flows.clone()).map_err(err)?),
        Arc::new(Scheme::strang(flows.clone()).map_err(err)?),
        Arc::new(Scheme::yoshida4(Scheme::strang(flows[..6].to_vec()).map_err(err)?).map_err(err)?),
        Arc::new(Forcing {
            amp: 5.0,
            omega: 2.466,
        }),
    ];
    for kind in [
        GadgetKind::Basic,
        GadgetKind::symmetric(),
        GadgetKind::yoshida(),
    ] {
        out.push(Arc::new(
            Gadget::new(flows[4].clone(), flows[0].clone(), kind, 1.0).map_err(err)?,
        ));
    }
    for name in ["lie1", "strang2", "yoshida3"] {
        out.push(dho_step(name, 0.3).map_err(err)?.0);
    }
    for s in DwSplitting::ALL {
        out.push(double_well_step(s.preset_name(), 1.0).map_err(err)?);
    }
    let v = Vdp {
        eps: 5.0,
        amp: 5.0,
        omega: 2.466,
    };
    out.push(vdp_method_step(VdpMethod::StrangCbabc, v).map_err(err)?);
    Ok(out)
}

fn contactness() -> Outcome {
    let samples = random_states(4, 100, 1.0, 0.4, 1.0);
    let mut exact = Tally::new("exact-substep schemes ≤ 1e-10");
    let schemes = exact_substep_schemes()?;
    for s in &schemes {
        let rep = verify_contactomorphism(&**s, &samples, 0.3, 0.1, 1e-10).map_err(err)?;
        exact.within(rep.worst_residual, 1e-10);
    }
    let mut out = vec![exact.finish()];
    out[0]
        .detail
        .push_str(&format!(" ({} schemes × 100 points)", schemes.len()));

    let v = Vdp {
        eps: 5.0,
        amp: 5.0,
        omega: 2.466,
    };
    let d = fh("x*u*p - 0.5*u^2 + x^2");
    let tol = Tolerance::new(1e-10, 1e-12).map_err(err)?;
    let lifted: Vec<(&str, Step)> = vec![
        (
            "lifted RK4",
            Arc::new(lifted_rk4(HamiltonianBase(d.clone()))),
        ),
        ("lifted RK4 (VdP)", Arc::new(lifted_rk4(VdpBase(v)))),
        (
            "lifted adaptive",
            Arc::new(lifted_adaptive(HamiltonianBase(d), tol)),
        ),
        (
            "lifted adaptive (VdP)",
            Arc::new(lifted_adaptive(VdpBase(v), tol)),
        ),
    ];
    let mut lifted_tally = Tally::new("lifted maps ≤ 1e-9");
    for (_, m) in &lifted {
        let rep = verify_contactomorphism(&**m, &samples, 0.3, 0.1, 1e-9).map_err(err)?;
        lifted_tally.within(rep.worst_residual, 1e-9);
    }
    out.push(lifted_tally.finish());

    let rk4 = FullRk4(dho_hamiltonian(0.3));
    let rep = verify_contactomorphism(&rk4, &samples, 0.0, 0.1, 1e-9).map_err(err)?;
    out.push(check(
        "full-system RK4 is not contact",
        !rep.passed,
        format!("worst residual {:.2e}", rep.worst_residual),
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// 5. DHO orders.

fn dho_orders() -> Outcome {
    let cfg = ExperimentConfig::new(Scenario::Dho)
        .resolve()
        .map_err(err)?;
    let presets: [(&str, SlopeExpectation); 10] = [
        ("lie1", within(1.0, 0.2)),
        ("lie2", within(1.0, 0.2)),
        ("lie3", within(1.0, 0.2)),
        ("strang1", within(2.0, 0.2)),
        ("strang2", within(2.0, 0.2)),
        ("strang3", within(2.0, 0.2)),
        ("yoshida1", within(4.0, 0.3)),
        ("yoshida2", within(4.0, 0.3)),
        ("yoshida3", within(4.0, 0.3)),
        ("lifted-rk4", within(4.0, 0.3)),
    ];
    presets
        .iter()
        .map(|(name, want)| {
            let run = run_dho(&cfg, name, true).map_err(err)?;
            Ok(slope_check(name, run.table.unwrap().fitted_slope, *want))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// 6. DHO dissipation.

fn abs_max(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn dho_dissipation() -> Outcome {
    let gamma = 0.3;
    let ham = dho_hamiltonian(gamma);
    let z0 = JetPoint::scalar(1.0, 0.0, 0.0);
    let run = |scheme: &str, h: f64| -> Result<_, String> {
        let (step, _) = dho_step(scheme, gamma).map_err(err)?;
        let rec = run_trajectory(&*step, &z0, 0.0, h, 50.0, &ham).map_err(err)?;
        if let Some(f) = &rec.failure {
            return Err(format!("{scheme} failed at t = {}: {}", f.time, f.error));
        }
        Ok(dho_diagnostics(&rec, gamma))
    };
    let mut out = Vec::new();
    for scheme in ["strang1", "strang2", "strang3"] {
        let d = run(scheme, 0.1)?;
        let q = d.h_rel_err.len() / 4;
        let (first, last) = (
            abs_max(&d.h_rel_err[..q]),
            abs_max(&d.h_rel_err[d.h_rel_err.len() - q..]),
        );
        out.push(check(
            format!("{scheme} H relative error bounded"),
            last <= 2.0 * first,
            format!("first quarter {first:.3e}, last quarter {last:.3e}"),
        ));
    }
    let mut fitted = Vec::new();
    for h in [0.1, 0.05, 0.025] {
        fitted.push(abs_max(&run("strang3", h)?.lambda_err) / (h * h));
    }
    let c = fitted.iter().cloned().fold(0.0f64, f64::max);
    let strang = run("strang3", 0.1)?;
    let bound_ok = c.is_finite() && abs_max(&strang.lambda_err) <= c * 0.01;
    out.push(check(
        "σ_cum + γt ≤ C·h²",
        bound_ok,
        format!("C = {c:.3e} from h ∈ {{0.1, 0.05, 0.025}}"),
    ));
    let rk4 = run("rk4", 0.1)?;
    let (e_rk4, e_strang) = (
        rk4.lambda_err.last().unwrap().abs(),
        strang.lambda_err.last().unwrap().abs(),
    );
    out.push(check(
        "RK4 λ error ≥ 10× Strang at t = 50",
        e_rk4 >= 10.0 * e_strang,
        format!("RK4 {e_rk4:.3e}, Strang {e_strang:.3e}"),
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// 7. Bernoulli substeps.

fn bernoulli() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut inv_b = Tally::new("B-flow preserves p·u");
    let mut inv_t = Tally::new("T-flow preserves (1+2σu)p");
    let mut ref_b = Tally::new("B-flow matches reference ≤ 1e-9");
    let mut ref_t = Tally::new("T-flow matches reference ≤ 1e-9");
    for z in random_states(70, 100, 1.0, 0.4, 1.0) {
        let sigma = loop {
            let s: f64 = rng.random_range(-1.0..=1.0);
            if s.abs() > 1e-3 {
                break s;
            }
        };
        let tau = rng.random_range(-0.2..=0.2);
        let b = BernoulliB { sigma }.apply(&z, 0.0, tau).map_err(err)?;
        let (i0, i1) = (z.p[0] * z.u, b.p[0] * b.u);
        inv_b.within((i1 - i0).abs() / i0.abs().max(1.0), 1e-13);
        let tf = BernoulliT::new(sigma).map_err(err)?;
        let t = tf.apply(&z, 0.0, tau).map_err(err)?;
        let (j0, j1) = (
            (1.0 + 2.0 * sigma * z.u) * z.p[0],
            (1.0 + 2.0 * sigma * t.u) * t.p[0],
        );
        inv_t.within((j1 - j0).abs() / j0.abs().max(1.0), 1e-13);

        let hb = fh(&format!("{sigma:?}*u*p^2"));
        let want =
            reference_contact_flow(&hb, &z, 0.0, &[tau], Tolerance::default()).map_err(err)?;
        ref_b.within(b.distance(&want[0]), 1e-9);
        let ht = fh(&format!("0.5*(1 + {:?}*u)*p^2", 2.0 * sigma));
        let want =
            reference_contact_flow(&ht, &z, 0.0, &[tau], Tolerance::default()).map_err(err)?;
        ref_t.within(t.distance(&want[0]), 1e-9);
    }
    Ok([inv_b, inv_t, ref_b, ref_t]
        .into_iter()
        .map(Tally::finish)
        .collect())
}

// ---------------------------------------------------------------------------
// 8. Gadget rates.

fn gadget_rates() -> Outcome {
    let mut out = Vec::new();
    for (kind, want) in [
        (GadgetKind::Basic, within(3.0, 0.3)),
        (GadgetKind::symmetric(), within(4.0, 0.1)),
        (GadgetKind::yoshida(), within(4.0, 0.1)),
    ] {
        let bc = up2_bracket_check(kind, &default_eps(), 8).map_err(err)?;
        let mut c = slope_check(
            &format!("bracket rate, {} gadget", kind_name(kind)),
            bc.rate,
            want,
        );
        c.passed &= bc.dropped.is_empty();
        out.push(c);
    }
    for sigma in [0.5, 1.0, 2.0] {
        let mut cfg = ExperimentConfig::new(Scenario::DoubleWell);
        cfg.params.sigma = Some(sigma);
        let cfg = cfg.resolve().map_err(err)?;
        for s in DwSplitting::ALL {
            let table = double_well_convergence(&cfg, s.preset_name()).map_err(err)?;
            out.push(slope_check(
                &format!("double well {} σ = {sigma}", s.preset_name()),
                table.fitted_slope,
                within(s.expected_slope(), 0.2),
            ));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// 9. Van der Pol.

fn van_der_pol() -> Outcome {
    let mut out = Vec::new();
    let regular = ExperimentConfig::new(Scenario::Vdp)
        .resolve()
        .map_err(err)?;
    let names: Vec<&str> = VdpMethod::ALL.iter().map(|m| m.preset_name()).collect();
    let runs = run_vdp(&regular, &names).map_err(err)?;
    let summary: Vec<String> = runs
        .iter()
        .map(|r| {
            let end = r.record.times.last().copied().unwrap_or(f64::NAN);
            format!(
                "{} reached t = {end:.2}, sup|x| = {:.3e}",
                r.name, r.sup_abs_x
            )
        })
        .collect();
    out.push(check(
        "regular-case boundedness",
        runs.iter().all(|r| r.bounded()),
        summary.join("; "),
    ));

    let mut unforced = ExperimentConfig::new(Scenario::Vdp);
    unforced.params.amp = Some(0.0);
    unforced.span = Some(10.0);
    let unforced = unforced.resolve().map_err(err)?;
    let conv = vdp_convergence(&unforced).map_err(err)?;
    out.push(slope_check(
        "unforced mutual convergence",
        conv.mutual.fitted_slope,
        SlopeExpectation::AtLeast(1.7),
    ));
    out.push(slope_check(
        "unforced lifted RK4 vs reference",
        conv.lifted_rk4.fitted_slope,
        SlopeExpectation::AtLeast(3.7),
    ));
    out.push(slope_check(
        "unforced Strang CBABC vs reference",
        conv.strang.fitted_slope,
        SlopeExpectation::AtLeast(1.7),
    ));

    let mut tally = Tally::new("lifted maps contact ≤ 1e-9 where defined");
    let mut checked = 0;
    for r in runs.iter().filter(|r| r.name.starts_with("lifted")) {
        tally.within(r.spot.worst_residual, 1e-9);
        checked += r.spot.checked;
    }
    let mut c = tally.finish();
    c.detail.push_str(&format!(" ({checked} states)"));
    out.push(c);
    Ok(out)
}

// ---------------------------------------------------------------------------
// 10. Dual-number Jacobians.

fn jacobians() -> Outcome {
    let states = random_states(10, 50, 1.0, 0.4, 1.0);
    let mut families: Vec<(String, Step)> = exact_flows()
        .into_iter()
        .map(|(f, _)| (f.label(), f))
        .collect();
    for s in exact_substep_schemes()? {
        families.push((s.label(), s));
    }
    let v = Vdp {
        eps: 5.0,
        amp: 5.0,
        omega: 2.466,
    };
    let d = fh("x*u*p - 0.5*u^2 + x^2");
    let tol = Tolerance::new(1e-10, 1e-12).map_err(err)?;
    families.push((
        "lifted RK4".into(),
        Arc::new(lifted_rk4(HamiltonianBase(d.clone()))),
    ));
    families.push(("lifted RK4 (VdP)".into(), Arc::new(lifted_rk4(VdpBase(v)))));
    families.push((
        "lifted adaptive".into(),
        Arc::new(lifted_adaptive(HamiltonianBase(d), tol)),
    ));
    families.push(("full RK4".into(), Arc::new(FullRk4(dho_hamiltonian(0.3)))));
    let mut tally = Tally::new("dual vs central differences ≤ 1e-5");
    let mut worst_family = String::new();
    for (label, step) in &families {
        for z in &states {
            let d = jacobian_discrepancy(&**step, z, 0.3, 0.1).map_err(err)?;
            if d > tally.worst {
                worst_family = label.clone();
            }
            tally.within(d, 1e-5);
        }
    }
    let mut c = tally.finish();
    c.detail.push_str(&format!(
        " over {} families, worst in {worst_family}",
        families.len()
    ));
    Ok(vec![c])
}

// ---------------------------------------------------------------------------
// 11. Chebyshev surrogate.

struct Sqrt1P2;

impl Hamiltonian for Sqrt1P2 {
    fn eval<S: Scalar>(&self, _x: &[S], _u: &S, p: &[S], _t: f64) -> S {
        (p[0].square() + 1.0).sqrt()
    }
}

fn surrogate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut repro = Tally::new("polynomials reproduced ≤ 1e-10");
    for _ in 0..20 {
        let n = rng.random_range(1..=2);
        let h: FloatHamiltonian = build(n, &random_terms(&mut rng, n, 3));
        let mut bounds = vec![(-1.0, 1.0); 2 * n + 1];
        bounds[0] = (-0.5, 2.0);
        let mut degrees = vec![2; 2 * n + 1];
        for d in degrees[n + 1..].iter_mut() {
            *d = 3;
        }
        let s = chebyshev_surrogate(&h, &bounds, &degrees, 0.0).map_err(err)?;
        repro.within(s.sampled_sup_error.max(s.poly.max_coeff_diff(&h)), 1e-10);
    }
    let bounds = [(-1.0, 1.0); 3];
    let errors: Vec<f64> = (1..=20)
        .map(|d| {
            chebyshev_surrogate(&Sqrt1P2, &bounds, &[0, 0, d], 0.0).map(|s| s.sampled_sup_error)
        })
        .collect::<Result<_, _>>()
        .map_err(err)?;
    // `√(1+p²)` is even: each parity decays on its own, an odd degree is
    // slightly worse than the even degree below it.
    let monotone = errors.iter().skip(2).zip(&errors).all(|(b, a)| b < a);
    Ok(vec![
        repro.finish(),
        check(
            "√(1+p²) error decays with degree (per parity)",
            monotone,
            format!(
                "degree 1..20: {:.2e} → {:.2e}",
                errors[0],
                errors[errors.len() - 1]
            ),
        ),
    ])
}

// ---------------------------------------------------------------------------

struct Criterion {
    id: u32,
    title: &'static str,
    run: fn() -> Outcome,
    budget: Duration,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            title: "bracket algebra",
            run: algebra_suite,
            budget: secs(10),
        },
        Criterion {
            id: 2,
            title: "bracket-operator identities",
            run: lemma_constructions,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 3,
            title: "depth-one decomposition",
            run: decomposition,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 4,
            title: "contactness",
            run: contactness,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 5,
            title: "DHO orders",
            run: dho_orders,
            budget: secs(60),
        },
        Criterion {
            id: 6,
            title: "DHO dissipation fidelity",
            run: dho_dissipation,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 7,
            title: "Bernoulli substeps",
            run: bernoulli,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 8,
            title: "gadget rates",
            run: gadget_rates,
            budget: secs(180),
        },
        Criterion {
            id: 9,
            title: "Van der Pol",
            run: van_der_pol,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 10,
            title: "dual-number Jacobians",
            run: jacobians,
            budget: SUITE_BUDGET,
        },
        Criterion {
            id: 11,
            title: "Chebyshev surrogate",
            run: surrogate,
            budget: SUITE_BUDGET,
        },
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut mismatches = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|id| id == c.id)) {
        let start = Instant::now();
        let mut checks =
            (c.run)().unwrap_or_else(|e| vec![check("run", false, format!("error: {e}"))]);
        let elapsed = start.elapsed();
        checks.push(check(
            "runtime",
            elapsed <= c.budget,
            format!(
                "{:.1} s, budget {} s",
                elapsed.as_secs_f64(),
                c.budget.as_secs()
            ),
        ));
        let expected = |name: &str| EXPECTED_FAILURES.contains(&(c.id, name));
        let unexpected = checks
            .iter()
            .filter(|k| k.passed == expected(&k.name))
            .count();
        let failed = checks.iter().any(|k| !k.passed);
        let status = match (failed, unexpected) {
            (false, 0) => "PASS",
            (true, 0) => "XFAIL",
            _ => "FAIL",
        };
        println!(
            "[{status:>5}] criterion {:>2}: {} ({:.1} s)",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        for k in &checks {
            let mark = match (k.passed, expected(&k.name)) {
                (true, false) => "ok",
                (false, false) => "FAILED",
                (false, true) => "expected failure",
                (true, true) => "UNEXPECTED PASS",
            };
            println!("          {:<48} {:<16} {}", k.name, mark, k.detail);
        }
        mismatches += unexpected;
    }
    if mismatches == 0 {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {mismatches} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
