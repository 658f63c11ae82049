//! The scenario registry and the experiments behind each entry.

use ainv_core::c0::{
    default_division_threshold, is_nonvanishing, perturb_to_noninvertible, plateau_family, random_bump,
    reciprocal_inverse_net, sup_norm, symmetric_growth, C0Algebra, C0Element, GridSpace,
};
use ainv_core::disk::{
    chi1_isometry_check, random_poly, search_annulus_deviation, search_identity_defect, search_product_deviation,
    CircleSampling, SearchConfig,
};
use ainv_core::linalg::vec_norm;
use ainv_core::linalg::CMatrix;
use ainv_core::module::{deconvolve, density_residual, module_action, Exponent, ModuleSignal, NoiseSpec};
use ainv_core::operators::{
    adjoint_duality_check, min_pure_state_defect, op_norm, output_projection, random_matrix, random_matrix_of_rank,
    random_vector, range_kernel_refuter, right_inverse_net, schatten_norm, svd, MatrixAlgebra, MatrixNorm,
    SchattenParams,
};
use ainv_core::verify::{check_approx_invertible, check_approximate_identity, Verdict};
use ainv_core::wiener::{
    band_limited_signal, convolve, fejer_family, fejer_kernel, l1_norm, tdz_witness, wiener_division,
    wiener_division_net, CircleGrid, CircleSignal, DivisionFloor, WienerAlgebra,
};
use ainv_core::{Complex64, Error, InverseNet, NetIndex, Schedule, SeedStream, Side};
use rand::Rng;

use crate::config::{Params, ScenarioConfig};
use crate::report::Recorder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Fejer,
    WienerDivision,
    Products,
    UmNet,
    Schatten,
    PureState,
    C0Interior,
    Disk13,
    Deconv,
    Tdz,
}

impl Scenario {
    /// Registry order, which is also the default run order.
    pub const ALL: [Scenario; 10] = [
        Scenario::Fejer,
        Scenario::WienerDivision,
        Scenario::Products,
        Scenario::UmNet,
        Scenario::Schatten,
        Scenario::PureState,
        Scenario::C0Interior,
        Scenario::Disk13,
        Scenario::Deconv,
        Scenario::Tdz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fejer => "fejer",
            Scenario::WienerDivision => "wiener-division",
            Scenario::Products => "products",
            Scenario::UmNet => "um-net",
            Scenario::Schatten => "schatten",
            Scenario::PureState => "pure-state",
            Scenario::C0Interior => "c0-interior",
            Scenario::Disk13 => "disk13",
            Scenario::Deconv => "deconv",
            Scenario::Tdz => "tdz",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Statement identifiers the scenario's rows refer to.
    pub fn anchors(self) -> &'static [&'static str] {
        match self {
            Scenario::Fejer => &["example:convolution_algebra"],
            Scenario::WienerDivision => &["thm:Wiener_ainv-Wie-alg"],
            Scenario::Products => &["prop:bounded_approx_inv_of_product"],
            Scenario::UmNet => &["prop:ApprInvCompact-opi"],
            Scenario::Schatten => &["eq:HSch-opi"],
            Scenario::PureState => &["Appinvl-modi-C*", "AppInvr-AppInvl"],
            Scenario::C0Interior => &["prop:criterion_ainv_in_csa", "app-inv-C0T"],
            Scenario::Disk13 => &[
                "lem:small_disk_algebra_far_from_unity",
                "lem:monomial_can_not_be_approximated",
            ],
            Scenario::Deconv => &["prop-module-1", "prop-module-2"],
            Scenario::Tdz => &["AppInvR->TdzL"],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::Fejer => "Fejér kernels as an approximate identity of L1(T)",
            Scenario::WienerDivision => "Wiener division nets: f * h_n = K_n, and the division floor",
            Scenario::Products => "certifying f1 * f2 from its factors in L1(T)",
            Scenario::UmNet => "U_m right inverse net of full-rank matrices; rank deficiency refuted",
            Scenario::Schatten => "rank-one Schatten norms and the operator-norm bound",
            Scenario::PureState => "dense range vs smallest singular value vs pure-state defect; adjoint duality",
            Scenario::C0Interior => "C0(R) certification iff non-vanishing; nearby non-invertible elements",
            Scenario::Disk13 => "the small disk algebra stays 1/3 away from the identity",
            Scenario::Deconv => "Lp(T) deconvolution error and density of f * Lp",
            Scenario::Tdz => "topological zero-divisor witnesses of Poisson kernels",
        }
    }

    /// Configuration keys the scenario reads.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Scenario::Fejer => &["grid", "schedule", "tol", "degree", "cases"],
            Scenario::WienerDivision => &["grid", "schedule", "tol", "radii", "floor"],
            Scenario::Products => &["grid", "schedule", "tol", "floor"],
            Scenario::UmNet => &["dim", "cases", "tol"],
            Scenario::Schatten => &["dim", "cases", "p", "tol"],
            Scenario::PureState => &["dim", "cases", "tol"],
            Scenario::C0Interior => &["grid", "half_width", "tail", "schedule", "cases", "tol"],
            Scenario::Disk13 => &["grid", "degree", "starts", "cases", "tol"],
            Scenario::Deconv => &[
                "grid", "schedule", "tol", "radii", "floor", "p", "sigma", "degree", "cases",
            ],
            Scenario::Tdz => &["grid", "schedule", "tol", "radii"],
        }
    }
}

fn doubling(lo: usize, hi: usize) -> Vec<usize> {
    core::iter::successors(Some(lo), |n| Some(n * 2))
        .take_while(|&n| n <= hi)
        .collect()
}

/// Default parameters of each scenario; unused fields hold neutral values.
pub fn defaults(s: Scenario) -> Params {
    let base = Params {
        grid: 1024,
        half_width: 20.0,
        tail: 1e-2,
        dim: 16,
        cases: 20,
        degree: 8,
        starts: 10_000,
        p: vec![2.0],
        schedule: doubling(8, 128),
        tol: 1e-2,
        radii: vec![0.5],
        floor: 1e-100,
        sigma: 1e-3,
    };
    match s {
        Scenario::Fejer => Params {
            grid: 4096,
            schedule: doubling(8, 256),
            cases: 4,
            ..base
        },
        Scenario::WienerDivision => Params {
            grid: 4096,
            tol: 1e-9,
            radii: vec![0.3, 0.5, 0.7],
            ..base
        },
        Scenario::Products => Params {
            schedule: vec![32, 64, 128],
            tol: 5e-2,
            ..base
        },
        Scenario::UmNet => Params {
            cases: 50,
            tol: 1e-9,
            ..base
        },
        Scenario::Schatten => Params {
            dim: 8,
            cases: 200,
            p: vec![1.0, 1.5, 2.0, f64::INFINITY],
            tol: 1e-10,
            ..base
        },
        Scenario::PureState => Params {
            dim: 8,
            cases: 100,
            tol: 1e-8,
            ..base
        },
        Scenario::C0Interior => Params {
            grid: 801,
            schedule: (1..=12).collect(),
            cases: 50,
            ..base
        },
        Scenario::Disk13 => Params { cases: 200, ..base },
        Scenario::Deconv => Params {
            schedule: doubling(8, 256),
            tol: 1e-9,
            ..base
        },
        Scenario::Tdz => Params {
            grid: 256,
            schedule: (1..=64).collect(),
            tol: 1e-10,
            ..base
        },
    }
}

/// Checks that need more than one field.
pub fn validate_extra(s: Scenario, p: &Params) -> Result<(), String> {
    let circle = matches!(
        s,
        Scenario::Fejer | Scenario::WienerDivision | Scenario::Products | Scenario::Deconv | Scenario::Tdz
    );
    if circle {
        if !p.grid.is_power_of_two() || p.grid < 4 {
            return Err(format!("`grid` must be a power of two of at least 4, got {}", p.grid));
        }
        let top = p.schedule.last().copied().unwrap_or(0);
        let needed = if s == Scenario::Deconv {
            top.max(DENSITY_INDEX)
        } else {
            top
        };
        if needed >= p.grid / 2 {
            return Err(format!(
                "net index {needed} does not fit the band of a grid of {}",
                p.grid
            ));
        }
    }
    if matches!(s, Scenario::Fejer | Scenario::Deconv) && p.degree >= p.grid / 2 {
        return Err(format!(
            "`degree` {} does not fit the band of a grid of {}",
            p.degree, p.grid
        ));
    }
    match s {
        Scenario::UmNet | Scenario::Schatten | Scenario::PureState if p.dim < 2 => {
            Err("`dim` must be at least 2".into())
        }
        Scenario::C0Interior if p.grid < 11 || p.grid.is_multiple_of(2) => {
            Err("`grid` must be odd and at least 11".into())
        }
        Scenario::Disk13 if p.tol >= 1.0 / 3.0 => Err("`tol` must be below 1/3".into()),
        _ => Ok(()),
    }
}

/// Runs one scenario; property failures land in the recorder, errors
/// abort the scenario.
pub fn run(cfg: &ScenarioConfig, rec: &mut Recorder) -> Result<(), Error> {
    let seed = SeedStream::new(cfg.seed);
    let p = &cfg.params;
    match cfg.scenario {
        Scenario::Fejer => fejer(p, seed, rec),
        Scenario::WienerDivision => wiener_div(p, rec),
        Scenario::Products => products(p, rec),
        Scenario::UmNet => um_net(p, seed, rec),
        Scenario::Schatten => schatten(p, seed, rec),
        Scenario::PureState => pure_state(p, seed, rec),
        Scenario::C0Interior => c0_interior(p, seed, rec),
        Scenario::Disk13 => disk13(p, seed, rec),
        Scenario::Deconv => deconv(p, seed, rec),
        Scenario::Tdz => tdz(p, rec),
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn schedule_of(p: &Params) -> Result<Schedule, Error> {
    Schedule::from_indices(p.schedule.iter().copied())
}

fn within(residual: f64, bound: f64) -> &'static str {
    if residual <= bound {
        "within"
    } else {
        "above"
    }
}

fn fejer(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const ID: &str = "example:convolution_algebra";
    let g = CircleGrid::new(p.grid)?;
    let model = WienerAlgebra::new(g);
    let label = format!("L1(T) M={}", p.grid);
    let schedule = schedule_of(p)?;

    for j in schedule.iter() {
        let n = j.get();
        let k = fejer_kernel(g, n)?;
        let mass = (l1_norm(&k) - 1.0).abs();
        rec.check(&label, ID, n, mass, 1e-9, mass <= 1e-9, || {
            format!("|K_{n}|_1 is off by {mass:e}")
        });
        let coeff = (-(n as i64)..=n as i64)
            .map(|m| (k.coefficient(m).re - (1.0 - m.abs() as f64 / n as f64).max(0.0)).abs())
            .fold(0.0, f64::max);
        rec.check(&label, ID, n, coeff, 1e-10, coeff <= 1e-10, || {
            format!("Fourier coefficients of K_{n} are off by {coeff:e}")
        });
    }

    let mut tests = vec![CircleSignal::poisson(g, 0.3)?, CircleSignal::poisson(g, 0.5)?];
    let mut rng = seed.rng(1);
    tests.extend((0..p.cases).map(|_| band_limited_signal(g, p.degree, 1.0 / 3.0, &mut rng)));
    let check = check_approximate_identity(&model, &fejer_family(g), &tests, p.tol, &schedule)?;
    for (i, j) in schedule.iter().enumerate() {
        let worst = check.traces.iter().map(|t| t.entries()[i].residual).fold(0.0, f64::max);
        rec.row(&label, ID, j.get(), worst, p.tol, within(worst, p.tol));
    }
    if !check.pass {
        rec.fail(format!(
            "Fejér residual {:e} at n = {} exceeds {:e}",
            check.worst_final_residual(),
            schedule.last(),
            p.tol
        ));
    }
    Ok(())
}

fn wiener_div(p: &Params, rec: &mut Recorder) -> Result<(), Error> {
    const ID: &str = "thm:Wiener_ainv-Wie-alg";
    let g = CircleGrid::new(p.grid)?;
    let floor = DivisionFloor::relative(p.floor);
    for &r in &p.radii {
        let label = format!("L1(T) M={} f=P_{r}", p.grid);
        let f = CircleSignal::poisson(g, r)?;
        for &n in &p.schedule {
            let h = wiener_division(&f, n, floor)?;
            let err = l1_norm(&convolve(&f, &h)?.sub(&fejer_kernel(g, n)?)?);
            rec.check(&label, ID, n, err, p.tol, err <= p.tol, || {
                format!("|f * h_{n} - K_{n}|_1 = {err:e} for r = {r}")
            });
        }
    }
    let chi = CircleSignal::character(g, 1)?;
    let n = *p.schedule.last().expect("validated");
    let label = format!("L1(T) M={} f=e^(i theta)", p.grid);
    match wiener_division(&chi, n, floor) {
        Err(Error::DivisionFloor { magnitude, .. }) => {
            rec.check(&label, ID, n, magnitude, p.floor, true, String::new);
        }
        Err(e) => return Err(e),
        Ok(_) => {
            rec.check(&label, ID, n, 0.0, p.floor, false, || {
                "division by e^(i theta) did not hit the floor".into()
            });
        }
    }
    Ok(())
}

fn rotated_poisson(g: CircleGrid, r: f64, angle: f64) -> Result<CircleSignal, Error> {
    Ok(CircleSignal::poisson(g, r)?.map_spectrum(|k, v| v * Complex64::from_polar(1.0, angle * k as f64)))
}

fn without_mean(f: CircleSignal) -> CircleSignal {
    f.map_spectrum(|k, v| if k == 0 { c(0.0) } else { v })
}

fn products(p: &Params, rec: &mut Recorder) -> Result<(), Error> {
    const ID: &str = "prop:bounded_approx_inv_of_product";
    let g = CircleGrid::new(p.grid)?;
    let floor = DivisionFloor::relative(p.floor);
    let schedule = schedule_of(p)?;
    // The refuter only looks at frequencies the nets actually divide by.
    let model = WienerAlgebra::new(g)
        .with_floor(floor)
        .with_band(schedule.last().get() + 1);
    let tests = [CircleSignal::poisson(g, 0.3)?];
    let left = [
        ("P_0.5", CircleSignal::poisson(g, 0.5)?),
        ("P_0.7 rotated", rotated_poisson(g, 0.7, 0.9)?),
        ("e^(i theta)", CircleSignal::character(g, 1)?),
        ("P_0.6 - mean", without_mean(CircleSignal::poisson(g, 0.6)?)),
    ];
    let right = [
        ("P_0.5", CircleSignal::poisson(g, 0.5)?),
        ("P_0.8", CircleSignal::poisson(g, 0.8)?),
        ("P_0.6 rotated", rotated_poisson(g, 0.6, -2.1)?),
        ("e^(2i theta)", CircleSignal::character(g, 2)?),
        ("e^(i theta)", CircleSignal::character(g, 1)?),
    ];
    let certifies = |f: &CircleSignal| -> Result<bool, Error> {
        let net = match wiener_division_net(f, &schedule, floor) {
            Ok(net) => net,
            Err(Error::DivisionFloor { .. }) => return Ok(false),
            Err(e) => return Err(e),
        };
        Ok(
            check_approx_invertible(&model, f.clone(), net, &tests, p.tol, &schedule)?
                .verdict
                .certifies(Side::Right),
        )
    };
    let left_ok = left.iter().map(|(_, f)| certifies(f)).collect::<Result<Vec<_>, _>>()?;
    let right_ok = right.iter().map(|(_, f)| certifies(f)).collect::<Result<Vec<_>, _>>()?;
    let mut case = 0;
    for ((n1, f1), ok1) in left.iter().zip(&left_ok) {
        for ((n2, f2), ok2) in right.iter().zip(&right_ok) {
            case += 1;
            let cert = ainv_core::wiener::product_invertibility_check(&model, f1, f2, &tests, p.tol, &schedule, floor)?;
            let residual = match (&cert.certificate, cert.failing_factor) {
                (Some(inner), _) => inner.right.worst_final_residual(),
                (None, Some(fail)) => fail.magnitude,
                (None, None) => f64::NAN,
            };
            rec.row(
                format!("L1(T) M={} {n1} * {n2}", p.grid),
                ID,
                case,
                residual,
                p.tol,
                cert.verdict.as_str(),
            );
            let product_ok = cert.verdict.certifies(Side::Right);
            if product_ok != (*ok1 && *ok2) {
                rec.fail(format!(
                    "case {case}: product {} but factors {ok1}/{ok2}",
                    cert.verdict.as_str()
                ));
            }
        }
    }
    if !left_ok.iter().chain(&right_ok).any(|&b| b) || left_ok.iter().chain(&right_ok).all(|&b| b) {
        rec.fail("the factor matrix needs both passing and failing factors");
    }
    Ok(())
}

fn hs(a: &CMatrix) -> f64 {
    a.frobenius_norm()
}

fn um_net(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const ID: &str = "prop:ApprInvCompact-opi";
    let n = p.dim;
    let label = format!("S2 {n}x{n}");
    let mut rng = seed.rng(1);
    let cs: Vec<CMatrix> = (0..20).map(|_| random_matrix(n, &mut rng)).collect();
    for case in 1..=p.cases {
        let t = random_matrix(n, &mut rng);
        let s = svd(&t)?;
        let net = right_inverse_net(&t)?;
        let mut proj = 0.0f64;
        for m in 1..=n {
            let tu = t.matmul(&net.member(NetIndex::new(m)?));
            proj = proj.max(tu.sub(&output_projection(&s, m)).max_abs());
            if m == n {
                let worst = cs.iter().map(|cm| hs(&tu.matmul(cm).sub(cm))).fold(0.0, f64::max);
                rec.check(&label, ID, m, worst, p.tol, worst <= p.tol, || {
                    format!("case {case}: |T U_n C - C|_2 = {worst:e}")
                });
            }
        }
        rec.check(&label, ID, n, proj, p.tol, proj <= p.tol, || {
            format!("case {case}: T U_m misses P_m by {proj:e}")
        });
    }
    // Rank-deficient operators have no right inverse net and are refuted.
    let model = MatrixAlgebra::new(n, MatrixNorm::Schatten(SchattenParams::hilbert_schmidt()))?;
    for case in 1..=p.cases.div_ceil(5) {
        let t = random_matrix_of_rank(n, n - 1 - case % (n - 1).min(3), &mut rng);
        let sigma = svd(&t)?.values;
        let ratio = sigma[n - 1] / sigma[0];
        let cert = check_approx_invertible(
            &model,
            t,
            InverseNet::right(move |_| CMatrix::identity(n)),
            &cs[..3],
            p.tol,
            &Schedule::up_to(2)?,
        )?;
        rec.row(&label, ID, case, ratio, 1e-8, cert.verdict.as_str());
        if cert.verdict != Verdict::Refuted {
            rec.fail(format!("rank-deficient case {case} was {}", cert.verdict.as_str()));
        }
    }
    Ok(())
}

fn schatten(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const ID: &str = "eq:HSch-opi";
    const OP_SLACK: f64 = 1e-9;
    let mut rng = seed.rng(1);
    let params =
        p.p.iter()
            .map(|&q| SchattenParams::new(q))
            .collect::<Result<Vec<_>, _>>()?;
    for case in 1..=p.cases {
        let n = 2 + (case - 1) % (p.dim - 1);
        let f = random_vector(n, &mut rng);
        let g = random_vector(n, &mut rng);
        let a = random_matrix(n, &mut rng);
        let op = op_norm(&a)?;
        let rank_one = CMatrix::outer(&f, &g);
        let target = vec_norm(&f) * vec_norm(&g);
        let mut worst_rank_one = 0.0f64;
        let mut worst_gap = f64::NEG_INFINITY;
        for &q in &params {
            worst_rank_one = worst_rank_one.max((schatten_norm(&rank_one, q)? - target).abs());
            worst_gap = worst_gap.max(op - schatten_norm(&a, q)?);
        }
        let label = format!("S_p {n}x{n}");
        rec.check(&label, ID, case, worst_rank_one, p.tol, worst_rank_one <= p.tol, || {
            format!("case {case}: |f (x) g|_p off by {worst_rank_one:e}")
        });
        rec.check(&label, ID, case, worst_gap, OP_SLACK, worst_gap <= OP_SLACK, || {
            format!("case {case}: operator norm exceeds a Schatten norm by {worst_gap:e}")
        });
    }
    Ok(())
}

fn pure_state(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const CRITERION: &str = "Appinvl-modi-C*";
    const DUALITY: &str = "AppInvr-AppInvl";
    let mut rng = seed.rng(1);
    let span = p.dim.saturating_sub(2).max(1);
    let mut singular = 0;
    for case in 1..=p.cases {
        let n = 3.min(p.dim) + (case - 1) % span;
        let n = n.min(p.dim);
        let t = match case % 4 {
            0 => random_matrix_of_rank(n, n - 1, &mut rng),
            1 => random_matrix_of_rank(n, 1 + case % (n - 1), &mut rng),
            _ => random_matrix(n, &mut rng),
        };
        let s = svd(&t)?;
        let top = s.values[0];
        let by_sigma = *s.values.last().expect("n >= 2") > p.tol * top;
        let by_range = range_kernel_refuter(&t, p.tol)?.dense_range;
        let (defect, _) = min_pure_state_defect(&t, 1000, seed.split(case as u64))?;
        let by_state = defect > p.tol * top;
        singular += usize::from(!by_sigma);
        let label = format!("B(H) {n}x{n}");
        let agree = by_sigma == by_range && by_sigma == by_state;
        rec.check(&label, CRITERION, case, defect / top, p.tol, agree, || {
            format!("case {case}: sigma {by_sigma}, range {by_range}, pure state {by_state}")
        });
        let dual = adjoint_duality_check(&t, p.tol)?;
        rec.check(&label, DUALITY, case, if dual { 0.0 } else { 1.0 }, 0.0, dual, || {
            format!("case {case}: adjoint duality fails")
        });
    }
    if p.cases >= 4 && singular == 0 {
        rec.fail("no singular matrices were drawn");
    }
    Ok(())
}

/// `a e^{i b x} / (1 + ((x - c)/w)^2)`: never zero, decays like `1/x^2`.
fn seeded_nonvanishing(space: &GridSpace, rng: &mut impl Rng) -> Result<C0Element, Error> {
    let a = rng.random_range(0.5..2.0);
    let b = rng.random_range(-2.0..2.0);
    let center = rng.random_range(-3.0..3.0);
    let w = rng.random_range(0.5..1.0);
    C0Element::from_fn(space, |x| {
        let d = (x - center) / w;
        Complex64::from_polar(a / (1.0 + d * d), b * x)
    })
}

fn c0_interior(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const CRITERION: &str = "prop:criterion_ainv_in_csa";
    const INTERIOR: &str = "app-inv-C0T";
    const ZERO: f64 = 1e-6;
    let space = GridSpace::new(p.half_width, p.grid, p.tail)?;
    let model = C0Algebra::new(space).with_zero_threshold(ZERO);
    let label = format!("C0(R) G={} L={}", p.grid, p.half_width);
    let schedule = schedule_of(p)?;
    let ramp = 2;
    let step = (space.center().saturating_sub(ramp) / schedule.last().get()).max(1);
    let family = plateau_family(space, symmetric_growth(&space, step, ramp), ramp, schedule.clone())?;
    let mut rng = seed.rng(1);
    let test_space = GridSpace::new(p.half_width, p.grid, p.tail / 10.0)?;
    let tests: Vec<C0Element> = (0..5).map(|_| random_bump(&test_space, &mut rng)).collect();
    let mut seen = [0usize; 2];
    for case in 1..=p.cases {
        let base = seeded_nonvanishing(&space, &mut rng)?;
        let f = if case % 2 == 1 {
            base
        } else {
            let z = space.point(rng.random_range(0..space.len()));
            base.map(|i, v| {
                let d = space.point(i) - z;
                v * (d * d / (1.0 + d * d))
            })
        };
        let nv = is_nonvanishing(&f, ZERO);
        let net = match reciprocal_inverse_net(&f, &family, default_division_threshold(&f).max(ZERO)) {
            Ok(net) => net,
            Err(Error::SingularDivision { .. }) => InverseNet::right(|_| C0Element::zero(&space)),
            Err(e) => return Err(e),
        };
        let verdict = check_approx_invertible(&model, f, net, &tests, p.tol, &schedule)?.verdict;
        seen[usize::from(nv.nonvanishing)] += 1;
        rec.row(&label, CRITERION, case, nv.min_value, ZERO, verdict.as_str());
        let expected = if nv.nonvanishing {
            verdict.is_certified()
        } else {
            verdict == Verdict::Refuted
        };
        if !expected {
            rec.fail(format!(
                "case {case}: min |f| = {:e} but verdict {}",
                nv.min_value,
                verdict.as_str()
            ));
        }
    }
    if p.cases >= 2 && (seen[0] == 0 || seen[1] == 0) {
        rec.fail("the cases need both vanishing and non-vanishing elements");
    }

    let f = C0Element::from_fn(&space, |x| c(1.0 / (1.0 + x * x)))?;
    for (i, eps) in [1e-1, 1e-2].into_iter().enumerate() {
        match perturb_to_noninvertible(&f, eps) {
            Ok(g) => {
                let dist = sup_norm(&g.zip(&f, |a, b| a - b));
                let has_zero = g.values().iter().any(|v| *v == c(0.0));
                rec.check(&label, INTERIOR, i + 1, dist, eps, dist <= eps && has_zero, || {
                    format!("eps {eps}: distance {dist:e}, exact zero {has_zero}")
                });
            }
            Err(e) => {
                rec.check(&label, INTERIOR, i + 1, f64::NAN, eps, false, || {
                    format!("eps {eps}: {e}")
                });
            }
        }
    }
    Ok(())
}

fn disk13(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const FAR: &str = "lem:small_disk_algebra_far_from_unity";
    const MONOMIAL: &str = "lem:monomial_can_not_be_approximated";
    let s = CircleSampling::new(p.grid)?;
    let label = format!("A0(D) angles={}", p.grid);
    let config = SearchConfig {
        starts: p.starts,
        ..SearchConfig::default()
    };
    let bound = 1.0 / 3.0 - p.tol;
    let searches = [
        (
            MONOMIAL,
            "annulus",
            search_annulus_deviation(p.degree, &s, config, seed.split(1))?,
        ),
        (
            FAR,
            "product",
            search_product_deviation(p.degree, &s, config, seed.split(2))?,
        ),
        (
            FAR,
            "identity",
            search_identity_defect(p.degree, &s, config, seed.split(3))?,
        ),
    ];
    for (id, what, found) in searches {
        let v = found.value;
        rec.check(&label, id, p.degree, v, bound, v >= bound, || {
            format!("{what} search reached {v:e} below {bound:e}")
        });
    }
    let mut rng = seed.rng(4);
    let mut worst = 0.0f64;
    for i in 0..p.cases {
        let poly = random_poly(1 + i % p.degree, 1.0, &mut rng);
        let (a, b) = chi1_isometry_check(&poly, &s);
        worst = worst.max((a - b).abs());
    }
    rec.check(&label, MONOMIAL, p.cases, worst, 1e-12, worst <= 1e-12, || {
        format!("multiplication by z changed a sup norm by {worst:e}")
    });
    Ok(())
}

/// Index at which density of `f * Lp` is asserted.
pub const DENSITY_INDEX: usize = 128;
const DENSITY_BOUND: f64 = 1e-3;

/// `|K_n * g - g|_2` from the Fourier coefficients of `g`.
fn fejer_tail(g: &CircleSignal, n: usize) -> f64 {
    let half = g.grid().len() as i64 / 2;
    (-half..half)
        .map(|k| {
            let w = (k.abs() as f64 / n as f64).min(1.0);
            (w * g.coefficient(k).norm()).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn deconv(p: &Params, seed: SeedStream, rec: &mut Recorder) -> Result<(), Error> {
    const RECOVERY: &str = "prop-module-1";
    const DENSITY: &str = "prop-module-2";
    let g = CircleGrid::new(p.grid)?;
    let floor = DivisionFloor::relative(p.floor);
    let mut rng = seed.rng(1);
    for &r in &p.radii {
        let f = CircleSignal::poisson(g, r)?;
        for (pi, &q) in p.p.iter().enumerate() {
            let exponent = Exponent::new(q)?;
            let label = format!("Lp(T) p={q} M={} f=P_{r}", p.grid);
            let truth = ModuleSignal::new(band_limited_signal(g, p.degree, 0.8, &mut rng), exponent);
            let b = module_action(&f, &truth)?;
            let noise = NoiseSpec::new(p.sigma, seed.split(pi as u64).seed())?;
            let mut last = f64::INFINITY;
            for &n in &p.schedule {
                let clean = deconvolve(&f, &b, n, None, Some(&truth), floor)?;
                let err = clean.error.expect("truth supplied");
                if q == 2.0 {
                    let tail = fejer_tail(&truth.signal, n);
                    let rel = (err - tail).abs() / tail.max(f64::MIN_POSITIVE);
                    rec.check(&label, RECOVERY, n, rel, p.tol, rel <= p.tol, || {
                        format!("n = {n}: error {err:e} vs Fejér tail {tail:e}")
                    });
                    if err > last {
                        rec.fail(format!("noiseless error grew at n = {n}"));
                    }
                    last = err;
                } else {
                    rec.row(
                        &label,
                        RECOVERY,
                        n,
                        clean.relative_error.unwrap_or(f64::NAN),
                        f64::NAN,
                        "report",
                    );
                }
                let noisy = deconvolve(&f, &b, n, Some(noise), Some(&truth), floor)?;
                rec.row(
                    &label,
                    RECOVERY,
                    n,
                    noisy.relative_error.unwrap_or(f64::NAN),
                    p.sigma,
                    "report",
                );
            }
        }
        let label = format!("L2(T) M={} f=P_{r}", p.grid);
        for case in 1..=p.cases {
            let z = ModuleSignal::new(band_limited_signal(g, g.band_limit(), 0.9, &mut rng), Exponent::TWO);
            let res = density_residual(&f, &z, DENSITY_INDEX, floor)?;
            rec.check(&label, DENSITY, case, res, DENSITY_BOUND, res <= DENSITY_BOUND, || {
                format!("target {case}: density residual {res:e}")
            });
        }
    }
    Ok(())
}

fn tdz(p: &Params, rec: &mut Recorder) -> Result<(), Error> {
    const ID: &str = "AppInvR->TdzL";
    let g = CircleGrid::new(p.grid)?;
    for &r in &p.radii {
        let f = CircleSignal::poisson(g, r)?;
        let label = format!("L1(T) M={} f=P_{r}", p.grid);
        let mut last = f64::INFINITY;
        for &n in &p.schedule {
            let v = tdz_witness(&f, n)?.value;
            let exact = r.powi(n as i32);
            let err = (v - exact).abs();
            rec.check(&label, ID, n, v, exact, err <= p.tol, || {
                format!("witness at N = {n} is {v:e}, expected {exact:e}")
            });
            if v >= last {
                rec.fail(format!("witness did not decrease at N = {n}"));
            }
            last = v;
        }
    }
    Ok(())
}
