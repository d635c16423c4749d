//! Reproducible experiments: verification suites, Solynin convergence,
//! the Brock gap, the translation construction and the contraction table.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::contraction::{
    class_i_decide, image_volume_brock, image_volume_voxel, is_witness, kappa, phi_from_setmap,
    phi_of, phi_value, pseudo_contraction_holds, ClassIVerdict, Contraction, Fold, FoldChain,
    StructuredMap,
};
use crate::corpus::{self, Rng8, ALL_KINDS};
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::nd::{
    apply_fiberwise, fibered_from_shape, markuslem_check, voxel_polarize, GridSpec, Shape, VoxelSet,
};
use crate::rearrange::{
    equimeasurable_check, layer_cake_reconstruct, lp_contraction_check, modulus_reduction_check,
    polarize_grid, polya_szego_polarization_check, rearrange_step,
};
use crate::scalar::{q, Scalar};
use crate::setmap::{
    check_smoothing, check_welldistributed, dyadic_first_index, polarize, solynin_distance,
    MapKind, Orientation, SetMap1D,
};
use crate::Rational;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Verification suites, one per library area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    IntervalAlgebra,
    Setmaps1d,
    Contractions,
    NdSets,
    Rearrangements,
    CliExperiments,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::IntervalAlgebra,
        Suite::Setmaps1d,
        Suite::Contractions,
        Suite::NdSets,
        Suite::Rearrangements,
        Suite::CliExperiments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::IntervalAlgebra => "interval_algebra",
            Suite::Setmaps1d => "setmaps_1d",
            Suite::Contractions => "contractions",
            Suite::NdSets => "nd_sets",
            Suite::Rearrangements => "rearrangements",
            Suite::CliExperiments => "cli_experiments",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Deliberate bugs for mutation-testing the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Uses `c − |t − c|` for the positive polarization contraction.
    PolarizationSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polarization-sign" => Ok(Fault::PolarizationSign),
            _ => Err(Error::InvalidParameter(format!("unknown fault {s:?}"))),
        }
    }
}

fn js<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_else(|e| format!("<{e}>"))
}

/// Number of stored counterexamples per check.
const KEPT_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub check: &'static str,
    pub cases: usize,
    pub failed: usize,
    /// The first few counterexamples.
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

struct Tally {
    suite: Suite,
    check: &'static str,
    cases: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(suite: Suite, check: &'static str) -> Self {
        Tally {
            suite,
            check,
            cases: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(witness());
            }
        }
    }

    fn record_result(&mut self, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || format!("{}: error {e}", witness())),
        }
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome {
            suite: self.suite,
            check: self.check,
            cases: self.cases,
            failed: self.failed,
            failures: self.failures,
        }
    }
}

/// Case counts of the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub cases: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cases: 200,
            seed: 0,
            fault: None,
        }
    }
}

/// Runs the selected suites (all of them for `None`); suites run in parallel.
pub fn verify(suite: Option<Suite>, cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let suites: Vec<Suite> = match suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    suites
        .par_iter()
        .map(|&s| {
            let seed = corpus::cell_seed(cfg.seed, s as u64);
            match s {
                Suite::IntervalAlgebra => verify_interval_algebra(cfg, seed),
                Suite::Setmaps1d => verify_setmaps(cfg, seed),
                Suite::Contractions => verify_contractions(cfg, seed),
                Suite::NdSets => verify_nd(cfg, seed),
                Suite::Rearrangements => verify_rearrangements(cfg, seed),
                Suite::CliExperiments => verify_experiments(cfg, seed),
            }
        })
        .flatten()
        .collect()
}

fn verify_interval_algebra(cfg: &VerifyConfig, seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::IntervalAlgebra;
    let mut rng = corpus::rng(seed);
    let mut incl = Tally::new(s, "inclusion_exclusion");
    let mut split = Tally::new(s, "difference_split");
    let mut canon = Tally::new(s, "canonical_form");
    let mut refl = Tally::new(s, "reflection_involution");
    let mut symd = Tally::new(s, "symdiff_measure");
    for _ in 0..cfg.cases {
        let a = corpus::random_union(&mut rng, -4, 4, 4, 8);
        let b = corpus::random_union(&mut rng, -4, 4, 4, 8);
        let c = corpus::rational_in(&mut rng, -3, 3, 4);
        let w = || format!("A={a} B={b}");
        incl.record(
            a.union(&b).measure() + a.intersect(&b).measure() == a.measure() + b.measure(),
            w,
        );
        let d = a.subtract(&b);
        split.record(
            d.intersect(&b).measure().is_zero() && d.union(&a.intersect(&b)).essentially_eq(&a),
            w,
        );
        let u = a.union(&b);
        canon.record(
            u.components().windows(2).all(|p| p[0].hi < p[1].lo)
                && u.components().iter().all(|i| i.lo < i.hi),
            w,
        );
        refl.record(
            a.reflect(&c).reflect(&c) == a && a.reflect(&c).measure() == a.measure(),
            || format!("A={a} c={c}"),
        );
        symd.record(
            a.symdiff_measure(&b)
                == a.measure() + b.measure() - a.intersect(&b).measure() * q(2, 1),
            w,
        );
    }
    vec![
        incl.done(),
        split.done(),
        canon.done(),
        refl.done(),
        symd.done(),
    ]
}

/// Input for a map of the given kind: Brock acts on intervals only.
fn input_for(rng: &mut Rng8, kind: MapKind) -> IntervalUnion<Rational> {
    let k = if corpus::kind_accepts_unions(kind) {
        4
    } else {
        1
    };
    corpus::random_union(rng, -4, 4, k, 8)
}

fn nested_for(rng: &mut Rng8, kind: MapKind) -> (IntervalUnion<Rational>, IntervalUnion<Rational>) {
    if corpus::kind_accepts_unions(kind) {
        return corpus::random_nested_pair(rng);
    }
    let a = corpus::random_union(rng, -4, 4, 1, 8);
    let (lo, hi) = (
        a.inf().cloned().expect("nonempty"),
        a.sup().cloned().expect("nonempty"),
    );
    let b = IntervalUnion::interval(
        lo - corpus::rational_in(rng, 0, 2, 8),
        hi + corpus::rational_in(rng, 0, 2, 8),
    );
    (a, b)
}

/// Measure preservation, monotonicity, idempotence of polarization, the
/// dyadic well-distribution inclusions and smoothing.
pub fn verify_setmaps(cfg: &VerifyConfig, seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::Setmaps1d;
    let mut out = Vec::new();
    for (i, kind) in ALL_KINDS.into_iter().enumerate() {
        let mut rng = corpus::rng(corpus::cell_seed(seed, i as u64));
        let mut meas = Tally::new(s, measure_check_name(kind));
        let mut mono = Tally::new(s, monotone_check_name(kind));
        let mut smooth = Tally::new(s, smoothing_check_name(kind));
        for _ in 0..cfg.cases {
            let map = corpus::random_setmap(&mut rng, kind);
            let a = input_for(&mut rng, kind);
            meas.record_result(
                map.apply(&a).map(|img| img.measure() == a.measure()),
                || format!("{map} A={a}"),
            );
            let (x, y) = nested_for(&mut rng, kind);
            mono.record_result(
                map.apply(&x)
                    .and_then(|ix| Ok(ix.is_essential_subset(&map.apply(&y)?))),
                || format!("{map} A={x} B={y}"),
            );
            let d = q(rng.gen_range(1..=8), 8);
            smooth.record_result(check_smoothing(&map, &a, &d), || {
                format!("{map} A={a} d={d}")
            });
        }
        out.extend([meas.done(), mono.done(), smooth.done()]);
    }
    let mut rng = corpus::rng(corpus::cell_seed(seed, 99));
    let mut idem = Tally::new(s, "polarization_idempotent");
    let mut well = Tally::new(s, "welldistributed_inclusions");
    for _ in 0..cfg.cases {
        let a = corpus::random_union(&mut rng, -4, 4, 4, 8);
        let c = corpus::rational_in(&mut rng, -3, 3, 4);
        let o = corpus::random_orientation(&mut rng);
        let once = polarize(&a, &c, o);
        idem.record(polarize(&once, &c, o) == once, || {
            format!("A={a} c={c} {}", o.symbol())
        });
    }
    for _ in 0..cfg.cases.div_ceil(10) {
        let a = corpus::random_union(&mut rng, -2, 2, 3, 4);
        for m in 1..=2 {
            well.record(check_welldistributed(&a, m), || format!("A={a} m={m}"));
        }
    }
    out.extend([idem.done(), well.done()]);
    out
}

fn measure_check_name(kind: MapKind) -> &'static str {
    match kind {
        MapKind::Reflection => "reflection_measure",
        MapKind::Polarization => "polarization_measure",
        MapKind::Steiner => "steiner_measure",
        MapKind::Solynin => "solynin_measure",
        MapKind::Brock => "brock_measure",
    }
}

fn monotone_check_name(kind: MapKind) -> &'static str {
    match kind {
        MapKind::Reflection => "reflection_monotone",
        MapKind::Polarization => "polarization_monotone",
        MapKind::Steiner => "steiner_monotone",
        MapKind::Solynin => "solynin_monotone",
        MapKind::Brock => "brock_monotone",
    }
}

fn smoothing_check_name(kind: MapKind) -> &'static str {
    match kind {
        MapKind::Reflection => "reflection_smoothing",
        MapKind::Polarization => "polarization_smoothing",
        MapKind::Steiner => "steiner_smoothing",
        MapKind::Solynin => "solynin_smoothing",
        MapKind::Brock => "brock_smoothing",
    }
}

/// Closed-form `φ` as used by the verification suite, with optional fault.
fn phi_formula(map: &SetMap1D<Rational>, t: &Rational, fault: Option<Fault>) -> Rational {
    match (fault, map.kind, map.orientation) {
        (Some(Fault::PolarizationSign), MapKind::Polarization, Orientation::Positive) => {
            let c = &map.center;
            c - (t - c).abs()
        }
        _ => phi_value(map, t),
    }
}

fn verify_contractions(cfg: &VerifyConfig, seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::Contractions;
    let mut rng = corpus::rng(seed);
    let mut formula = Tally::new(s, "phi_formula_matches_setmap");
    let radii = [q(1, 2), q(1, 1), q(2, 1)];
    for kind in ALL_KINDS {
        for orient in [Orientation::Positive, Orientation::Negative] {
            let c = corpus::rational_in(&mut rng, -2, 2, 4);
            let map = match kind {
                MapKind::Polarization => SetMap1D::polarization(c, orient),
                MapKind::Solynin => SetMap1D::solynin(c, orient),
                _ => corpus::random_setmap(&mut rng, kind),
            };
            for i in -20..=20 {
                let t = q(i, 4);
                for r in &radii {
                    let expected = phi_formula(&map, &t, cfg.fault);
                    match phi_from_setmap(&map, &t, r) {
                        Ok(got) => formula.record(got == expected, || {
                            format!(
                                "{map} t={t} r={r}: set map gives {got}, formula gives {expected}"
                            )
                        }),
                        Err(e) => formula.record(false, || format!("{map} t={t} r={r}: {e}")),
                    }
                }
            }
        }
    }

    let mut lip = Tally::new(s, "phi_is_one_lipschitz");
    for kind in ALL_KINDS {
        let map = corpus::random_setmap(&mut rng, kind);
        let phi = phi_of(&map);
        lip.record(phi.is_one_lipschitz(), || format!("{map}"));
        for i in -12..=12 {
            let t = q(i, 3);
            lip.record(phi.eval(&t) == phi_formula(&map, &t, cfg.fault), || {
                format!(
                    "{map} t={t}: {} vs {}",
                    phi.eval(&t),
                    phi_formula(&map, &t, cfg.fault)
                )
            });
        }
    }

    let mut members = Tally::new(s, "parallel_folds_in_class_i");
    let u = vec![q(1, 1), q(1, 1)];
    for i in 0..cfg.cases.div_ceil(4) {
        let chain = corpus::random_parallel_chain(&mut rng, &u, 5);
        let ok = chain
            .phi_along(&u)
            .map(|phi| class_i_decide(&phi, &q(-6, 1), &q(6, 1), i as u64).is_member());
        members.record(ok == Some(true), || js(&chain));
    }

    let mut witness = Tally::new(s, "brock_witness");
    for b in [q(1, 4), q(1, 2), q(3, 4)] {
        let phi = phi_of(&SetMap1D::brock(q(0, 1), b.clone()).expect("b in (0,1)"));
        let ok = match class_i_decide(&phi, &q(-2, 1), &q(2, 1), 0) {
            ClassIVerdict::Witness { a, b: w } => is_witness(&phi, &a, &w),
            ClassIVerdict::Member => false,
        };
        witness.record(ok, || format!("b={b}"));
    }

    let mut pseudo = Tally::new(s, "pseudo_contraction_exact");
    for _ in 0..cfg.cases {
        let chain = corpus::random_fold_chain(&mut rng, 2, 4);
        let (b1, b2) = (
            corpus::random_ball(&mut rng, 2),
            corpus::random_ball(&mut rng, 2),
        );
        let (x, y) = (
            (b1.center.clone(), b1.r.clone()),
            (b2.center.clone(), b2.r.clone()),
        );
        pseudo.record(
            pseudo_contraction_holds(&chain, &x, &y, &Rational::zero()),
            || format!("{} {} {}", js(&chain), js(&b1), js(&b2)),
        );
    }
    vec![
        formula.done(),
        lip.done(),
        members.done(),
        witness.done(),
        pseudo.done(),
    ]
}

fn verify_nd(cfg: &VerifyConfig, seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::NdSets;
    let mut rng = corpus::rng(seed);
    let mut mark = Tally::new(s, "mirror_ball_track");
    for _ in 0..cfg.cases.div_ceil(4) {
        let chain = corpus::random_fold_chain(&mut rng, 2, 5);
        for _ in 0..4 {
            let b = corpus::random_ball(&mut rng, 2);
            mark.record_result(markuslem_check(&chain, &b), || {
                format!("{} {}", js(&chain), js(&b))
            });
        }
    }

    let mut fiber = Tally::new(s, "fiberwise_measure");
    let grid = GridSpec::centered(1, q(2, 1), q(1, 4)).expect("grid");
    for _ in 0..cfg.cases.div_ceil(10) {
        let b = corpus::random_ball(&mut rng, 2);
        let shape = Shape::ball(&b);
        let kind = ALL_KINDS[rng.gen_range(0..ALL_KINDS.len())];
        let map = corpus::random_setmap(&mut rng, kind);
        let ok = fibered_from_shape(&shape, &grid, 1)
            .and_then(|set| Ok(apply_fiberwise(&set, &map)?.volume() == set.volume()));
        fiber.record_result(ok, || format!("{} {map}", js(&b)));
    }

    let mut vox = Tally::new(s, "voxel_polarize_count");
    let vgrid = GridSpec::centered(2, q(2, 1), q(1, 4)).expect("grid");
    let planes = [
        (vec![q(1, 1), q(0, 1)], q(0, 1)),
        (vec![q(0, 1), q(1, 1)], q(1, 2)),
        (vec![q(1, 1), q(1, 1)], q(0, 1)),
        (vec![q(1, 1), q(-1, 1)], q(0, 1)),
    ];
    for _ in 0..cfg.cases.div_ceil(10) {
        let b = corpus::random_ball(&mut rng, 2);
        let v = VoxelSet::from_shape(&Shape::ball(&b), vgrid.clone());
        let (n, c) = planes[rng.gen_range(0..planes.len())].clone();
        let fold = Fold::new(n, c, corpus::random_orientation(&mut rng)).expect("plane");
        let ok = match voxel_polarize(&v, &fold) {
            Ok(p) => Ok(p.count() == v.count()),
            // the mirror image may leave the grid; that is not a failure
            Err(Error::GridIncompatibleFold) => continue,
            Err(e) => Err(e),
        };
        vox.record_result(ok, || format!("{} {}", js(&b), js(&fold)));
    }
    vec![mark.done(), fiber.done(), vox.done()]
}

fn verify_rearrangements(cfg: &VerifyConfig, seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::Rearrangements;
    let mut out = Vec::new();
    let mut bridge = Tally::new(s, "layer_cake_bridge");
    let mut equi = Tally::new(s, "equimeasurable");
    let mut lp = Tally::new(s, "lp_contraction");
    for (i, kind) in ALL_KINDS.into_iter().enumerate() {
        let mut rng = corpus::rng(corpus::cell_seed(seed, i as u64));
        let convex = !corpus::kind_accepts_unions(kind);
        for _ in 0..cfg.cases.div_ceil(4) {
            let map = corpus::random_setmap(&mut rng, kind);
            let f = corpus::random_step_function(&mut rng, 4, convex);
            let g = corpus::random_step_function(&mut rng, 4, convex);
            let w = || format!("{map} f={}", js(&f));
            match (rearrange_step(&map, &f), layer_cake_reconstruct(&map, &f)) {
                (Ok(a), Ok(b)) => {
                    bridge.record(a.essentially_eq(&b), w);
                    equi.record(equimeasurable_check(&a, &f), w);
                }
                (Err(e), _) | (_, Err(e)) => bridge.record(false, || format!("{}: {e}", w())),
            }
            for p in [1, 2] {
                lp.record_result(lp_contraction_check(&map, &f, &g, p), || {
                    format!("{map} p={p} f={} g={}", js(&f), js(&g))
                });
            }
        }
    }
    out.extend([bridge.done(), equi.done(), lp.done()]);

    let mut rng = corpus::rng(corpus::cell_seed(seed, 50));
    let mut multiset = Tally::new(s, "grid_multiset");
    let mut modulus = Tally::new(s, "grid_modulus");
    let mut energy = Tally::new(s, "grid_dirichlet");
    for _ in 0..cfg.cases {
        let f = corpus::random_grid_function(&mut rng, 12);
        let c = corpus::random_grid_center(&mut rng);
        let d = q(rng.gen_range(0..=6), 2);
        let w = || {
            format!(
                "f={} c={c}",
                js(&f.values.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            )
        };
        multiset.record_result(
            polarize_grid(&f, &c).map(|p| p.nonzero_values_sorted() == f.nonzero_values_sorted()),
            w,
        );
        modulus.record_result(modulus_reduction_check(&f, &c, &d), || {
            format!("{} d={d}", w())
        });
        energy.record_result(polya_szego_polarization_check(&f, &c, 2), w);
    }
    out.extend([multiset.done(), modulus.done(), energy.done()]);
    out
}

fn verify_experiments(cfg: &VerifyConfig, seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::CliExperiments;
    let mut rng = corpus::rng(seed);
    let mut trans = Tally::new(s, "translate_demo_exact");
    for _ in 0..cfg.cases.div_ceil(2) {
        let a = corpus::random_union(&mut rng, -4, 4, 4, 8);
        let shift = corpus::rational_in(&mut rng, 0, 3, 8);
        trans.record_result(translate_demo(&shift, &a).map(|r| r.equal), || {
            format!("A={a} a={shift}")
        });
    }
    let mut det = Tally::new(s, "solynin_converge_deterministic");
    for _ in 0..3 {
        let a = corpus::random_union(&mut rng, -2, 2, 2, 4);
        let ok = solynin_converge(&a, 3).and_then(|(x, _)| Ok(x == solynin_converge(&a, 3)?.0));
        det.record_result(ok, || format!("A={a}"));
    }
    vec![trans.done(), det.done()]
}

/// One row of [`solynin_converge`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolyninRow {
    pub m: u32,
    #[serde(with = "crate::io::scalar")]
    pub distance: Rational,
    /// Number of polarizations in the chain.
    pub steps: u64,
}

impl SolyninRow {
    pub fn distance_decimal(&self) -> f64 {
        self.distance.as_f64()
    }
}

pub const SOLYNIN_M_MAX: u32 = 9;

/// `|A_{m,0} Δ ♦_So A|` for `m = 1..=m_max`, one independent cell per `m`.
/// Returns the rows and the wall time of each cell in seconds.
pub fn solynin_converge(
    a: &IntervalUnion<Rational>,
    m_max: u32,
) -> Result<(Vec<SolyninRow>, Vec<f64>)> {
    if m_max == 0 || m_max > SOLYNIN_M_MAX {
        return Err(Error::InvalidParameter(format!(
            "m_max={m_max} must lie in 1..={SOLYNIN_M_MAX}"
        )));
    }
    let cells: Vec<(SolyninRow, f64)> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let start = Instant::now();
            let distance = solynin_distance(a, m);
            let steps = (1 - dyadic_first_index(m)) as u64;
            (
                SolyninRow { m, distance, steps },
                start.elapsed().as_secs_f64(),
            )
        })
        .collect();
    Ok(cells.into_iter().unzip())
}

/// Result of [`translate_demo`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslateReport {
    #[serde(with = "crate::io::scalar")]
    pub a: Rational,
    /// First hyperplane position (absent when no step is needed).
    pub t: Option<String>,
    /// Second hyperplane position `t + a/2`.
    pub second_center: Option<String>,
    pub input: IntervalUnion<Rational>,
    /// Sets after each polarization.
    pub steps: Vec<IntervalUnion<Rational>>,
    pub expected: IntervalUnion<Rational>,
    pub equal: bool,
}

impl TranslateReport {
    pub fn polarizations(&self) -> usize {
        self.steps.len()
    }

    pub fn output(&self) -> &IntervalUnion<Rational> {
        self.steps.last().unwrap_or(&self.input)
    }
}

/// Translates `set` by `a ≥ 0` with two exact polarizations: first in
/// `t` with positive side `[t, ∞)` for some `t ≥ sup A + a/2`, then in
/// `t + a/2` with positive side `(-∞, t + a/2]`.
pub fn translate_demo(a: &Rational, set: &IntervalUnion<Rational>) -> Result<TranslateReport> {
    if a.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "translation length {a} must be nonnegative"
        )));
    }
    let expected = set.translate(a);
    if a.is_zero() {
        return Ok(TranslateReport {
            a: a.clone(),
            t: None,
            second_center: None,
            input: set.clone(),
            steps: Vec::new(),
            equal: true,
            expected,
        });
    }
    // `t = sup A + a` keeps A ∪ (A + a/2) strictly inside the negative side.
    let t = set.sup().cloned().unwrap_or_else(Rational::zero) + a.clone();
    let first = polarize(set, &t, Orientation::Positive);
    let second_center = t.clone() + a / q(2, 1);
    let second = polarize(&first, &second_center, Orientation::Negative);
    let equal = second == expected;
    Ok(TranslateReport {
        a: a.clone(),
        t: Some(t.to_exact_string()),
        second_center: Some(second_center.to_exact_string()),
        input: set.clone(),
        steps: vec![first, second],
        expected,
        equal,
    })
}

/// One row of [`contraction_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionRow {
    pub map: SetMap1D<Rational>,
    pub phi: &'static str,
    pub psi: &'static str,
    /// `φ` as a piecewise-linear map.
    pub phi_pl: String,
    pub member: bool,
    pub witness: Option<[String; 2]>,
    /// `φ` recovered from the set map agrees with the closed form.
    pub cross_validated: bool,
    pub samples: usize,
}

fn closed_forms(map: &SetMap1D<Rational>) -> (&'static str, &'static str) {
    match (map.kind, map.orientation) {
        (MapKind::Reflection, _) => ("2c - t", "x - 2(<x,u> - c)u"),
        (MapKind::Polarization, Orientation::Positive) => {
            ("c + |t - c|", "x + (|<x,u> - c| - (<x,u> - c))u")
        }
        (MapKind::Polarization, Orientation::Negative) => {
            ("c - |t - c|", "x - (|<x,u> - c| + (<x,u> - c))u")
        }
        (MapKind::Steiner, _) => ("c", "x - (<x,u> - c)u"),
        (MapKind::Solynin, Orientation::Positive) => ("max(c, t)", "x + max(0, c - <x,u>)u"),
        (MapKind::Solynin, Orientation::Negative) => ("min(c, t)", "x - max(0, <x,u> - c)u"),
        (MapKind::Brock, _) => ("c + b(t - c)", "x - (1 - b)(<x,u> - c)u"),
    }
}

/// The maps of the contraction table, all centered at 0.
pub fn report_maps() -> Vec<SetMap1D<Rational>> {
    let c = Rational::zero();
    vec![
        SetMap1D::reflection(c.clone()),
        SetMap1D::polarization(c.clone(), Orientation::Positive),
        SetMap1D::polarization(c.clone(), Orientation::Negative),
        SetMap1D::steiner(c.clone()),
        SetMap1D::solynin(c.clone(), Orientation::Positive),
        SetMap1D::solynin(c.clone(), Orientation::Negative),
        SetMap1D::brock(c, q(1, 2)).expect("b in (0,1)"),
    ]
}

/// Closed forms, class-𝓘 verdicts and set-map cross-validation (41 values
/// of `t` in `[-5, 5]`, `r ∈ {1/2, 1, 2}`) for every map kind.
pub fn contraction_report() -> Vec<ContractionRow> {
    report_maps()
        .into_iter()
        .map(|map| {
            let phi = phi_of(&map);
            let c = map.center.clone();
            let verdict = class_i_decide(&phi, &(c.clone() - q(4, 1)), &(c + q(4, 1)), 0);
            let mut samples = 0;
            let mut agree = true;
            for i in -20..=20 {
                let t = q(i, 4);
                for r in [q(1, 2), q(1, 1), q(2, 1)] {
                    samples += 1;
                    agree &= phi_from_setmap(&map, &t, &r)
                        .map(|v| v == phi_value(&map, &t))
                        .unwrap_or(false);
                }
            }
            let (phi_s, psi_s) = closed_forms(&map);
            let (member, witness) = match verdict {
                ClassIVerdict::Member => (true, None),
                ClassIVerdict::Witness { a, b } => {
                    (false, Some([a.to_exact_string(), b.to_exact_string()]))
                }
            };
            ContractionRow {
                phi_pl: phi.to_string(),
                phi: phi_s,
                psi: psi_s,
                member,
                witness,
                cross_validated: agree,
                samples,
                map,
            }
        })
        .collect()
}

/// Parameters of [`brock_gap`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrockGapConfig {
    #[serde(with = "crate::io::scalar")]
    pub b: Rational,
    pub n: usize,
    /// Fold proposals per restart.
    pub budget: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Ball centers on which the sup-distance is measured.
    pub samples: usize,
}

impl BrockGapConfig {
    pub fn new(b: Rational, budget: usize, seed: u64) -> Self {
        BrockGapConfig {
            b,
            n: 2,
            budget,
            seed,
            restarts: 4,
            samples: 64,
        }
    }
}

/// Exactly verified class-𝓘 verdict for `φ_B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassIChannel {
    pub verdict: &'static str,
    pub witness: Option<[String; 2]>,
    pub phi_at_witness: Option<[String; 2]>,
    pub verified: bool,
}

/// `H^n(ψ_B(B^n)) = b κ_n` against `κ_n`, with a voxel cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeChannel {
    pub n: usize,
    pub image_volume: f64,
    pub ball_volume: f64,
    pub voxel_estimate: f64,
    pub voxel_h: f64,
    pub preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofChannel {
    pub class_i: ClassIChannel,
    pub volume: VolumeChannel,
}

/// Heuristic search output; not a proof of anything.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceChannel {
    pub label: &'static str,
    pub budget: usize,
    pub restarts: usize,
    pub samples: usize,
    pub identity_distance: f64,
    /// Smallest sup-distance to `ψ_B` on the sample found by the search.
    pub floor: f64,
    pub best_chain: FoldChain<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrockGapReport {
    pub config: BrockGapConfig,
    /// `b = 1`: `ψ_B` is the identity, reached by the empty chain.
    pub degenerate: bool,
    pub proof_channel: ProofChannel,
    pub evidence_channel: EvidenceChannel,
}

/// Accepted improvement of the fold search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchRow {
    pub restart: usize,
    pub proposal: usize,
    pub chain_len: usize,
    pub sup_distance: f64,
}

fn sup_distance(ys: &[Vec<f64>], targets: &[Vec<f64>]) -> (f64, usize) {
    ys.iter()
        .zip(targets)
        .enumerate()
        .fold((0.0, 0), |(best, at), (i, (y, t))| {
            let d = crate::contraction::dist_sq(y, t).sqrt();
            if d > best {
                (d, i)
            } else {
                (best, at)
            }
        })
}

/// Greedy search over fold chains: each proposal is either a random fold or
/// the fold exchanging the worst image with its target; it is kept when it
/// lowers the sup-distance.
fn fold_search(
    cfg: &BrockGapConfig,
    restart: usize,
    xs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> (FoldChain<f64>, f64, Vec<SearchRow>) {
    let mut rng = corpus::rng(corpus::cell_seed(cfg.seed, restart as u64));
    let mut ys = xs.to_vec();
    let (mut best, mut worst) = sup_distance(&ys, targets);
    let mut chain = FoldChain::identity();
    let mut rows = Vec::new();
    for proposal in 0..cfg.budget {
        if best == 0.0 {
            break;
        }
        let fold = if rng.gen_bool(0.5) {
            let u = corpus::unit_vector(&mut rng, cfg.n);
            let level = rng.gen_range(-1.5..1.5);
            Fold {
                normal: u,
                level,
                orientation: corpus::random_orientation(&mut rng),
            }
        } else {
            let (y, t) = (&ys[worst], &targets[worst]);
            let normal: Vec<f64> = t.iter().zip(y).map(|(a, b)| a - b).collect();
            let mid: Vec<f64> = t.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
            if normal.iter().all(|v| v.abs() < 1e-15) {
                continue;
            }
            let level = crate::contraction::dot(&mid, &normal);
            Fold {
                normal,
                level,
                orientation: Orientation::Positive,
            }
        };
        let moved: Vec<Vec<f64>> = ys.iter().map(|y| fold.apply(y)).collect();
        let (d, w) = sup_distance(&moved, targets);
        if d < best {
            best = d;
            worst = w;
            ys = moved;
            chain.push(fold);
            rows.push(SearchRow {
                restart,
                proposal,
                chain_len: chain.len(),
                sup_distance: d,
            });
        }
    }
    (chain, best, rows)
}

/// Three channels of evidence that `ψ_B` is not a limit of fold chains.
/// Accepts `b ∈ (0, 1]`; `b = 1` is reported as degenerate.
pub fn brock_gap(cfg: &BrockGapConfig) -> Result<(BrockGapReport, Vec<SearchRow>)> {
    if !cfg.b.is_positive() || cfg.b > Rational::from_int(1) {
        return Err(Error::InvalidParameter(format!(
            "brock parameter b={} must lie in (0, 1]",
            cfg.b
        )));
    }
    if cfg.n < 2 {
        return Err(Error::InvalidDimension(cfg.n));
    }
    let map = SetMap1D::brock(Rational::zero(), cfg.b.clone())?;
    let degenerate = cfg.b == Rational::from_int(1);

    let phi = phi_of(&map);
    let class_i = match class_i_decide(&phi, &q(-2, 1), &q(2, 1), cfg.seed) {
        ClassIVerdict::Member => ClassIChannel {
            verdict: "member",
            witness: None,
            phi_at_witness: None,
            verified: degenerate,
        },
        ClassIVerdict::Witness { a, b } => ClassIChannel {
            verdict: "witness",
            verified: is_witness(&phi, &a, &b),
            phi_at_witness: Some([
                phi.eval(&a).to_exact_string(),
                phi.eval(&b).to_exact_string(),
            ]),
            witness: Some([a.to_exact_string(), b.to_exact_string()]),
        },
    };

    let bf = cfg.b.as_f64();
    let mut u = vec![0.0; cfg.n];
    u[cfg.n - 1] = 1.0;
    let psi = StructuredMap::unit(SetMap1D::brock(0.0, bf)?, u)?;
    let voxel_h = if cfg.n == 2 { 1.0 / 128.0 } else { 1.0 / 32.0 };
    let (voxel_estimate, _) = image_volume_voxel(&psi, cfg.n, voxel_h, 0.0);
    let volume = VolumeChannel {
        n: cfg.n,
        image_volume: image_volume_brock(bf, cfg.n),
        ball_volume: kappa(cfg.n),
        voxel_estimate,
        voxel_h,
        preserved: degenerate,
    };

    let mut rng = corpus::rng(cfg.seed);
    let xs: Vec<Vec<f64>> = (0..cfg.samples)
        .map(|_| corpus::point_in_unit_ball(&mut rng, cfg.n))
        .collect();
    let targets: Vec<Vec<f64>> = xs.iter().map(|x| psi.apply(x)).collect();
    let identity_distance = sup_distance(&xs, &targets).0;
    let runs: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| fold_search(cfg, r, &xs, &targets))
        .collect();
    let mut rows = Vec::new();
    let mut best: Option<(FoldChain<f64>, f64)> = None;
    for (chain, d, trace) in runs {
        rows.extend(trace);
        if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((chain, d));
        }
    }
    let (best_chain, floor) = best.unwrap_or((FoldChain::identity(), identity_distance));
    let evidence = EvidenceChannel {
        label: "EVIDENCE (heuristic search, not a proof)",
        budget: cfg.budget,
        restarts: cfg.restarts,
        samples: cfg.samples,
        identity_distance,
        floor,
        best_chain,
    };
    let report = BrockGapReport {
        config: cfg.clone(),
        degenerate,
        proof_channel: ProofChannel { class_i, volume },
        evidence_channel: evidence,
    };
    Ok((report, rows))
}

/// Grid and tolerance policy recorded with every run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    pub arithmetic: String,
    pub tolerance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
}

/// Written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub tool_version: String,
    pub policy: Policy,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value, seed: u64, policy: Policy) -> Self {
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            command: command.into(),
            params,
            seed,
            tool_version: TOOL_VERSION.into(),
            policy,
            timestamp_unix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_passes_on_a_correct_build() {
        let cfg = VerifyConfig {
            cases: 30,
            seed: 1,
            fault: None,
        };
        for o in verify(None, &cfg) {
            assert!(o.passed(), "{o:?}");
        }
    }

    #[test]
    fn injected_sign_bug_is_caught() {
        let cfg = VerifyConfig {
            cases: 10,
            seed: 1,
            fault: Some(Fault::PolarizationSign),
        };
        let out = verify(Some(Suite::Contractions), &cfg);
        let bad: Vec<_> = out.iter().filter(|o| !o.passed()).collect();
        assert!(!bad.is_empty());
        assert!(
            bad[0].failures[0].contains("formula gives"),
            "{:?}",
            bad[0].failures
        );
    }

    #[test]
    fn single_suite_runs_alone() {
        let cfg = VerifyConfig {
            cases: 5,
            seed: 0,
            fault: None,
        };
        let out = verify(Some(Suite::IntervalAlgebra), &cfg);
        assert!(out.iter().all(|o| o.suite == Suite::IntervalAlgebra));
        assert!(!out.is_empty());
    }

    #[test]
    fn solynin_examples() {
        let (rows, secs) =
            solynin_converge(&IntervalUnion::interval(q(-1, 1), q(-1, 2)), 1).unwrap();
        assert_eq!(rows[0].distance, q(1, 2));
        assert_eq!(rows[0].steps, 5);
        assert_eq!(secs.len(), 1);
        let (rows, _) = solynin_converge(&IntervalUnion::interval(q(0, 1), q(1, 1)), 4).unwrap();
        assert!(rows.iter().all(|r| r.distance.is_zero()));
        assert!(solynin_converge(&IntervalUnion::interval(q(0, 1), q(1, 1)), 10).is_err());
    }

    #[test]
    fn translate_examples() {
        let r = translate_demo(&q(1, 1), &IntervalUnion::interval(q(1, 1), q(2, 1))).unwrap();
        assert_eq!(r.t.as_deref(), Some("3"));
        assert_eq!(r.steps[0], IntervalUnion::interval(q(4, 1), q(5, 1)));
        assert_eq!(r.steps[1], IntervalUnion::interval(q(2, 1), q(3, 1)));
        assert!(r.equal);
        let z = translate_demo(&q(0, 1), &IntervalUnion::interval(q(1, 1), q(2, 1))).unwrap();
        assert_eq!(z.polarizations(), 0);
        assert!(z.equal);
    }

    #[test]
    fn report_rows() {
        let rows = contraction_report();
        assert_eq!(rows.len(), 7);
        assert!(rows.iter().all(|r| r.cross_validated && r.samples == 123));
        let by = |k: MapKind| rows.iter().filter(move |r| r.map.kind == k);
        assert!(by(MapKind::Polarization).all(|r| r.member));
        assert!(by(MapKind::Steiner).all(|r| r.member));
        assert!(by(MapKind::Brock).all(|r| !r.member && r.witness.is_some()));
    }

    #[test]
    fn brock_gap_channels() {
        let (rep, rows) = brock_gap(&BrockGapConfig {
            budget: 300,
            ..BrockGapConfig::new(q(1, 2), 300, 7)
        })
        .unwrap();
        assert!(rep.proof_channel.class_i.verified);
        assert_eq!(
            rep.proof_channel.volume.image_volume,
            std::f64::consts::PI / 2.0
        );
        assert!(rep.evidence_channel.floor > 0.0);
        assert!(rep.evidence_channel.floor <= rep.evidence_channel.identity_distance);
        assert!(rows
            .windows(2)
            .all(|w| w[0].restart != w[1].restart || w[1].sup_distance < w[0].sup_distance));

        let (deg, _) = brock_gap(&BrockGapConfig::new(q(1, 1), 50, 7)).unwrap();
        assert!(deg.degenerate);
        assert_eq!(deg.evidence_channel.floor, 0.0);
        assert!(deg.evidence_channel.best_chain.is_empty());
        assert!(brock_gap(&BrockGapConfig::new(q(0, 1), 10, 7)).is_err());
        assert!(brock_gap(&BrockGapConfig::new(q(3, 2), 10, 7)).is_err());
    }

    #[test]
    fn brock_gap_is_deterministic() {
        let cfg = BrockGapConfig::new(q(1, 2), 200, 3);
        let a = serde_json::to_string(&brock_gap(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&brock_gap(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
