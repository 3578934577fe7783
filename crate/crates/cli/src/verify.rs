//! The full invariant suite, grouped, with the first failing case reported.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qclone_core::analysis::{bloch_grid, optimal_xi, universality_lambda};
use qclone_core::cloner::{
    apply, build_machine, closed_form_marginals, marginals, schwarz_bound, CloningIsometry, MachineSpec, Marginals,
};
use qclone_core::hybrid::{
    direct_sum, hcm_distortion_universal_partner, hcm_fidelity, hybrid_closed_form_marginal, pair_fidelities,
    BhPairParams, HybridFamily, HybridKind,
};
use qclone_core::state::{density_of, fidelity, hs_distance, product_density, PureQubit};
use qclone_core::Result;

/// Source of base machines; the default is [`build_machine`].
pub type Builder<'a> = &'a (dyn Fn(&MachineSpec) -> Result<CloningIsometry> + Sync);

const RANDOM_CASES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupResult {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub tol: f64,
    pub seed: u64,
    pub groups: Vec<GroupResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&GroupResult> {
        self.groups.iter().find(|g| g.failure.is_some())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify tol={:e} seed={}", self.tol, self.seed)?;
        for g in &self.groups {
            match &g.failure {
                None => writeln!(f, "PASS {} ({} cases)", g.name, g.cases)?,
                Some(_) => writeln!(f, "FAIL {}", g.name)?,
            }
        }
        if let Some(g) = self.first_failure() {
            writeln!(f, "first failure in {}: {}", g.name, g.failure.as_deref().unwrap_or(""))?;
        }
        Ok(())
    }
}

struct Ctx<'a> {
    tol: f64,
    rng: ChaCha8Rng,
    builder: Builder<'a>,
}

type Check = std::result::Result<usize, String>;
type Group = fn(&mut Ctx) -> Check;

fn fail<T>(msg: String) -> std::result::Result<T, String> {
    Err(msg)
}

fn core<T>(r: Result<T>, what: impl fmt::Display) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn describe(psi: &PureQubit) -> String {
    format!("psi=({}, {})", psi.alpha(), psi.beta())
}

impl Ctx<'_> {
    fn state(&mut self) -> PureQubit {
        let theta = self.rng.gen_range(-1.0f64..1.0).acos();
        PureQubit::bloch(theta, self.rng.gen_range(0.0..2.0 * PI)).unwrap()
    }

    fn real_state(&mut self) -> PureQubit {
        let t = self.rng.gen_range(0.0..2.0 * PI);
        PureQubit::new(t.cos().into(), t.sin().into()).unwrap()
    }

    fn bh(&mut self) -> MachineSpec {
        let xi = self.rng.gen_range(0.0..=0.5);
        MachineSpec::bh(xi, self.rng.gen_range(0.0..=1.0) * schwarz_bound(xi)).unwrap()
    }

    fn pauli(&mut self) -> MachineSpec {
        MachineSpec::pauli(self.rng.gen_range(0.0..2.0), self.rng.gen_range(0.01..2.0)).unwrap()
    }

    fn specs(&mut self) -> Vec<MachineSpec> {
        let mut specs = vec![
            MachineSpec::WoottersZurek,
            MachineSpec::bh_optimal(),
            MachineSpec::PhaseCovariant,
            MachineSpec::AntiClone,
        ];
        for _ in 0..RANDOM_CASES / 2 {
            specs.push(self.bh());
            specs.push(self.pauli());
        }
        specs
    }

    fn build(&self, spec: &MachineSpec) -> std::result::Result<CloningIsometry, String> {
        core((self.builder)(spec), spec.label())
    }

    fn run(&self, spec: &MachineSpec, psi: &PureQubit) -> std::result::Result<Marginals, String> {
        let v = self.build(spec)?;
        let what = || format!("{} on {}", spec.label(), describe(psi));
        let joint = core(apply(&v, psi), what())?;
        core(marginals(&joint), what())
    }

    fn hybrid(&self, family: &HybridFamily, lambda: f64) -> std::result::Result<CloningIsometry, String> {
        let spec = core(family.hybrid_spec(lambda), format!("{family:?}"))?;
        let (a, b) = (self.build(&spec.first)?, self.build(&spec.second)?);
        core(direct_sum(lambda, &a, &b), format!("{family:?} at lambda={lambda}"))
    }

    fn close(&self, got: f64, want: f64, tol: f64, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
        if (got - want).abs() <= tol {
            Ok(())
        } else {
            fail(format!("{}: got {got}, expected {want} (tol {tol:e})", what()))
        }
    }
}

fn isometry(ctx: &mut Ctx) -> Check {
    let specs = ctx.specs();
    let mut n = 0;
    for spec in &specs {
        let v = ctx.build(spec)?;
        if !v.is_isometry(ctx.tol) {
            return fail(format!("{} is not an isometry at tol {:e}", spec.label(), ctx.tol));
        }
        n += 1;
    }
    for _ in 0..RANDOM_CASES / 4 {
        let lambda = ctx.rng.gen_range(0.0..=1.0);
        let (a, b) = (
            specs[ctx.rng.gen_range(0..specs.len())],
            specs[ctx.rng.gen_range(0..specs.len())],
        );
        let v = core(direct_sum(lambda, &ctx.build(&a)?, &ctx.build(&b)?), "hybrid")?;
        if !v.is_isometry(ctx.tol) {
            return fail(format!(
                "hybrid lambda={lambda} of {} and {} is not an isometry",
                a.label(),
                b.label()
            ));
        }
        n += 1;
    }
    Ok(n)
}

fn density(ctx: &mut Ctx) -> Check {
    let specs = ctx.specs();
    for spec in &specs {
        let psi = ctx.state();
        let m = ctx.run(spec, &psi)?;
        for (name, rho) in [("a", &m.a), ("b", &m.b), ("ab", &m.ab)] {
            let t = rho.matrix().trace();
            if (t.re - 1.0).abs() > ctx.tol || t.im.abs() > ctx.tol {
                return fail(format!("{} on {}: Tr rho_{name} = {t}", spec.label(), describe(&psi)));
            }
        }
    }
    Ok(specs.len())
}

fn compare(
    ctx: &Ctx,
    what: String,
    got: &Marginals,
    a: &qclone_core::DensityOperator,
    b: &qclone_core::DensityOperator,
) -> std::result::Result<(), String> {
    let d = got
        .a
        .matrix()
        .max_abs_diff(a.matrix())
        .max(got.b.matrix().max_abs_diff(b.matrix()));
    if d > ctx.tol {
        return fail(format!("{what}: closed form differs from construction by {d:e}"));
    }
    Ok(())
}

fn oracle(ctx: &mut Ctx) -> Check {
    let mut n = 0;
    for _ in 0..RANDOM_CASES {
        let psi = ctx.state();
        let real = ctx.real_state();
        let specs = [
            (MachineSpec::WoottersZurek, psi),
            (ctx.bh(), psi),
            (ctx.pauli(), psi),
            (MachineSpec::AntiClone, psi),
            (MachineSpec::PhaseCovariant, real),
        ];
        for (spec, psi) in specs {
            let (a, b) = core(closed_form_marginals(&spec, &psi), spec.label())?;
            let m = ctx.run(&spec, &psi)?;
            compare(ctx, format!("{} on {}", spec.label(), describe(&psi)), &m, &a, &b)?;
            n += 1;
        }
        let lambda = ctx.rng.gen_range(0.0..=1.0);
        let p = ctx.rng.gen_range(0.0..=1.0);
        for family in [HybridFamily::BhAnti, HybridFamily::BhPauli { p }] {
            let (a, b) = core(
                hybrid_closed_form_marginal(&family, lambda, &psi),
                format!("{family:?}"),
            )?;
            let v = ctx.hybrid(&family, lambda)?;
            let m = core(apply(&v, &psi).and_then(|j| marginals(&j)), format!("{family:?}"))?;
            compare(
                ctx,
                format!("{family:?} lambda={lambda} on {}", describe(&psi)),
                &m,
                &a,
                &b,
            )?;
            n += 1;
        }
    }
    Ok(n)
}

fn universality(ctx: &mut Ctx) -> Check {
    let states = core(bloch_grid(120), "grid")?;
    let p = ctx.rng.gen_range(0.0..=1.0);
    let specs = [
        MachineSpec::bh_optimal(),
        MachineSpec::pauli_line(p).unwrap(),
        MachineSpec::AntiClone,
    ];
    for spec in &specs {
        let v = ctx.build(spec)?;
        let mut f = Vec::with_capacity(states.len());
        for psi in &states {
            let m = core(apply(&v, psi).and_then(|j| marginals(&j)), spec.label())?;
            f.push((
                core(fidelity(psi, &m.a), spec.label())?,
                core(fidelity(psi, &m.b), spec.label())?,
            ));
        }
        for (i, (fa, fb)) in f.iter().enumerate() {
            if (fa - f[0].0).abs() > ctx.tol || (fb - f[0].1).abs() > ctx.tol {
                return fail(format!(
                    "{} is state dependent: F=({fa}, {fb}) on {} vs ({}, {})",
                    spec.label(),
                    describe(&states[i]),
                    f[0].0,
                    f[0].1
                ));
            }
        }
    }
    Ok(specs.len() * states.len())
}

fn constants(ctx: &mut Ctx) -> Check {
    let tol = ctx.tol;
    let mut n = 0;
    for _ in 0..10 {
        let psi = ctx.state();
        let what = || describe(&psi);
        let m = ctx.run(&MachineSpec::bh_optimal(), &psi)?;
        ctx.close(core(fidelity(&psi, &m.a), "F")?, 5.0 / 6.0, tol, || {
            format!("BH fidelity on {}", what())
        })?;
        ctx.close(
            core(hs_distance(&m.a, &density_of(&psi)), "D_a")?,
            1.0 / 18.0,
            tol,
            || format!("BH D_a on {}", what()),
        )?;
        let d_ab = core(hs_distance(&m.ab, &product_density(&psi)), "D_ab")?;
        ctx.close(d_ab, 2.0 / 9.0, tol, || format!("BH D_ab on {}", what()))?;
        let m = ctx.run(&MachineSpec::AntiClone, &psi)?;
        ctx.close(core(fidelity(&psi, &m.a), "F")?, 2.0 / 3.0, tol, || {
            format!("anti F_a on {}", what())
        })?;
        let fb = core(fidelity(&psi.orthogonal(), &m.b), "F")?;
        ctx.close(fb, 2.0 / 3.0, tol, || format!("anti F_b vs orthogonal on {}", what()))?;
        n += 5;
    }
    let pc = 0.5 + 1.0 / 8f64.sqrt();
    let h = 0.5f64.sqrt();
    for psi in [
        PureQubit::new(h.into(), h.into()).unwrap(),
        PureQubit::new(h.into(), (-h).into()).unwrap(),
    ] {
        let m = ctx.run(&MachineSpec::PhaseCovariant, &psi)?;
        ctx.close(core(fidelity(&psi, &m.a), "F")?, pc, tol, || {
            format!("PC fidelity on {}", describe(&psi))
        })?;
        n += 1;
    }

    // Trapezoidal average of the WZ distortion over α².
    let points = 10001;
    let v = ctx.build(&MachineSpec::WoottersZurek)?;
    let h = 1.0 / (points - 1) as f64;
    let mut total = 0.0;
    for i in 0..points {
        let psi = core(PureQubit::from_alpha_sq(i as f64 * h), "grid")?;
        let m = core(apply(&v, &psi).and_then(|j| marginals(&j)), "wz")?;
        let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        total += w * core(hs_distance(&m.a, &density_of(&psi)), "D_a")?;
    }
    ctx.close(total * h, 1.0 / 3.0, tol.max(1e-6), || {
        format!("WZ average distortion, n={points}")
    })?;

    let mut rng = ctx.rng.clone();
    for _ in 0..RANDOM_CASES {
        let (xi, xi_prime): (f64, f64) = (rng.gen_range(0.0..=0.5), rng.gen_range(0.0..=0.5));
        let Ok(l) = universality_lambda(xi, xi_prime) else {
            continue;
        };
        if !l.in_unit_interval {
            continue;
        }
        let rhs = 1.0 - 2.0 * xi_prime - 2.0 * l.lambda * (xi - xi_prime);
        let params = core(BhPairParams::new(xi, xi_prime, rhs, rhs, l.lambda), "params")?;
        let f = core(hcm_fidelity(&params), "hcm fidelity")?;
        ctx.close(f, 5.0 / 6.0, tol, || {
            format!("hybrid fidelity at xi={xi}, xi'={xi_prime}, lambda={}", l.lambda)
        })?;
        n += 1;
    }
    ctx.rng = rng;
    Ok(n + 1)
}

fn trade_off(_: &mut Ctx) -> Check {
    let mut n = 0;
    for l in 1..=10 {
        let lambda = l as f64 / 10.0;
        for i in (0..=100).filter(|&i| i != 50) {
            let p = i as f64 / 100.0;
            let (f1, f2) = core(pair_fidelities(HybridKind::BhPauli, lambda, Some(p), None), "bh-pauli")?;
            if (f1 > 5.0 / 6.0) != (f2 < 5.0 / 6.0) {
                return fail(format!("p={p}, lambda={lambda}: F1={f1}, F2={f2}"));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn monotonicity(_: &mut Ctx) -> Check {
    let mut last = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..=100 {
        let lambda = i as f64 / 100.0;
        let f = core(pair_fidelities(HybridKind::BhAnti, lambda, None, None), "bh-anti")?;
        if f.0 <= last.0 || f.1 <= last.1 {
            return fail(format!("bh-anti fidelities not increasing at lambda={lambda}"));
        }
        last = f;
    }
    Ok(101)
}

fn optimum(ctx: &mut Ctx) -> Check {
    let tol = ctx.tol;
    let mut n = 0;
    for alpha_sq in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let mut d_first = None;
        for l in 1..=10 {
            let lambda = l as f64 / 10.0;
            let r = core(optimal_xi(alpha_sq, lambda), "optimum")?;
            let f = |x: f64| hcm_distortion_universal_partner(alpha_sq, x, lambda);
            let h = 1e-3;
            let curvature = (f(r.xi_star + h) - 2.0 * f(r.xi_star) + f(r.xi_star - h)) / (h * h);
            let what = || format!("alpha2={alpha_sq}, lambda={lambda}");
            ctx.close(curvature, 16.0 * lambda * lambda, tol.max(1e-6), || {
                format!("curvature at {}", what())
            })?;
            let at_star = f(r.xi_star);
            ctx.close(at_star, r.d_min, tol, || format!("minimum at {}", what()))?;
            let d0 = *d_first.get_or_insert(at_star);
            ctx.close(at_star, d0, tol, || {
                format!("lambda dependence of the minimum at {}", what())
            })?;
            let grid_min = (0..=500).map(|i| f(i as f64 * 1e-3)).fold(f64::INFINITY, f64::min);
            if grid_min < r.d_min - 1e-9 {
                return fail(format!(
                    "grid search beats the optimum at {}: {grid_min} < {}",
                    what(),
                    r.d_min
                ));
            }
            n += 1;
        }
    }
    Ok(n)
}

pub fn run_verify(tol: f64, seed: u64) -> VerifyReport {
    run_verify_with(tol, seed, &build_machine)
}

/// Same as [`run_verify`] with the base machines supplied by `builder`.
pub fn run_verify_with(tol: f64, seed: u64, builder: Builder) -> VerifyReport {
    let mut ctx = Ctx {
        tol,
        rng: ChaCha8Rng::seed_from_u64(seed),
        builder,
    };
    let groups: [(&'static str, Group); 8] = [
        ("isometry", isometry),
        ("density", density),
        ("oracle", oracle),
        ("universality", universality),
        ("constants", constants),
        ("trade-off", trade_off),
        ("monotonicity", monotonicity),
        ("optimum", optimum),
    ];
    let groups = groups
        .into_iter()
        .map(|(name, check)| match check(&mut ctx) {
            Ok(cases) => GroupResult {
                name,
                cases,
                failure: None,
            },
            Err(msg) => GroupResult {
                name,
                cases: 0,
                failure: Some(msg),
            },
        })
        .collect();
    VerifyReport { tol, seed, groups }
}
