//! Approximate subdivision (`dcm_rho`), completeness certification
//! (`certify_rho`) and the precision-doubling driver (`r_isolate`).
//!
//! All nodes live on the dyadic grid `(-1/2 + i 2^-h, -1/2 + (i+1) 2^-h)` of the
//! scaled problem. Every predicate is evaluated exactly: non-dyadic
//! denominators such as `(4n)^n` are multiplied into both sides of each
//! comparison instead of being rounded.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coeffstream::{make_scaled, tau_bound, CoefficientOracle, ScaledProblem};
use crate::dyadic::{
    ceil_log2_u64, rational_ceil, rational_floor, scale_pow2, Dyadic, DyadicRepr, Rational,
};
use crate::polyops::{
    classify_dyadics, extend_plus_scaled, reverse_shift_dyadic, scale_half, shift_neg_half,
    t_test_at_zero, taylor_shift_1, DyadicPoly, SignClass,
};
use crate::rootbound::compute_gamma;
use crate::Error;

/// `(-1/2 + i 2^-h, -1/2 + (i+1) 2^-h)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeInterval {
    pub depth: u32,
    pub index: BigInt,
}

impl NodeInterval {
    pub fn root() -> Self {
        NodeInterval {
            depth: 0,
            index: BigInt::zero(),
        }
    }

    pub fn new(depth: u32, index: BigInt) -> Self {
        NodeInterval { depth, index }
    }

    pub fn left(&self) -> Self {
        NodeInterval {
            depth: self.depth + 1,
            index: &self.index << 1,
        }
    }

    pub fn right(&self) -> Self {
        NodeInterval {
            depth: self.depth + 1,
            index: (&self.index << 1) + 1,
        }
    }

    pub fn lo(&self) -> Dyadic {
        // (2i - 2^h) 2^-(h+1)
        let h = self.depth as usize;
        Dyadic::new((&self.index << 1) - (BigInt::one() << h), -(self.depth as i64) - 1)
    }

    pub fn hi(&self) -> Dyadic {
        &self.lo() + &self.width()
    }

    pub fn width(&self) -> Dyadic {
        Dyadic::pow2(-(self.depth as i64))
    }

    /// `I` extended by `w / (4n)` on both sides.
    pub fn plus(&self, n: usize) -> (Rational, Rational) {
        self.extended(4 * n)
    }

    /// `I` extended by `w / (2n)` on both sides.
    pub fn tilde(&self, n: usize) -> (Rational, Rational) {
        self.extended(2 * n)
    }

    fn extended(&self, k: usize) -> (Rational, Rational) {
        let e = self.width().to_rational() / Rational::from_integer(k.into());
        (self.lo().to_rational() - &e, self.hi().to_rational() + e)
    }

    /// Whether `other` is this node or one of its descendants.
    pub fn is_ancestor_of(&self, other: &NodeInterval) -> bool {
        other.depth >= self.depth && (&other.index >> (other.depth - self.depth) as usize) == self.index
    }
}

/// Dyadic polynomial `f̃_I` with its certificate `‖f_I - f̃_I‖ <= 2^-ρ_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxPoly {
    pub poly: DyadicPoly,
    pub precision: i64,
}

#[derive(Clone, Debug)]
pub struct ActiveNode {
    pub interval: NodeInterval,
    pub approx: ApproxPoly,
}

impl ActiveNode {
    fn rho(&self) -> i64 {
        self.approx.precision
    }

    /// Children with precisions `ρ_I - 1` and `ρ_I - 2`.
    fn bisect(&self) -> (ActiveNode, ActiveNode) {
        let rho = self.rho();
        let s = scale_half(&self.approx.poly);
        let right = taylor_shift_1(&s).round(rho - 1);
        let left = s.round(rho);
        (
            ActiveNode {
                interval: self.interval.left(),
                approx: ApproxPoly {
                    poly: left,
                    precision: rho - 1,
                },
            },
            ActiveNode {
                interval: self.interval.right(),
                approx: ApproxPoly {
                    poly: right,
                    precision: rho - 2,
                },
            },
        )
    }
}

/// `Ĩ = (c, d)` isolating one real root of the scaled polynomial, with
/// `sign f(c)`, `sign f(d)` and a lower bound `B` on `|f|` at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingRecord {
    pub lo: Rational,
    pub hi: Rational,
    pub sign_left: i8,
    pub sign_right: i8,
    pub bound: Rational,
    /// Node whose test produced the record.
    pub node: NodeInterval,
    /// Precision `ρ_I` at that node.
    pub node_precision: i64,
}

/// One closed piece `[lo, hi]` of `[-1/2, 1/2]` minus the records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncertainPiece {
    pub lo: Rational,
    pub hi: Rational,
    /// Record whose right endpoint is `lo`.
    pub left_record: Option<usize>,
    /// Record whose left endpoint is `hi`.
    pub right_record: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionOfUncertainty {
    pub pieces: Vec<UncertainPiece>,
}

/// `[-1/2, 1/2]` minus the union of the (open) record intervals, which must be
/// sorted and pairwise disjoint.
pub fn region_of_uncertainty(records: &[IsolatingRecord]) -> RegionOfUncertainty {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let end = half.clone();
    let mut cursor = -half;
    let mut cursor_rec: Option<usize> = None;
    let mut pieces = Vec::new();
    for (k, r) in records.iter().enumerate() {
        if r.lo >= cursor && cursor <= end {
            let hi = if r.lo > end { end.clone() } else { r.lo.clone() };
            pieces.push(UncertainPiece {
                lo: cursor.clone(),
                hi: hi.clone(),
                left_record: cursor_rec,
                right_record: if r.lo <= end { Some(k) } else { None },
            });
        }
        if r.hi > cursor {
            cursor = r.hi.clone();
            cursor_rec = Some(k);
        }
    }
    if cursor <= end {
        pieces.push(UncertainPiece {
            lo: cursor,
            hi: end,
            left_record: cursor_rec,
            right_record: None,
        });
    }
    RegionOfUncertainty { pieces }
}

/// What happened at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceAction {
    /// Sign-variation proxy is one-sided.
    Discard,
    Record,
    /// Inclusion test held but the record conditions failed.
    Reject,
    Bisect,
    /// Certify: the node lies inside a record interval.
    Covered,
    /// Certify: excluded by the T-test on `f̃_I`.
    ExcludeT,
    /// Certify: excluded by the monotone surrogate.
    ExcludeMonotone,
    Insufficient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Dcm,
    Certify,
}

/// One line of the structured trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub phase: Phase,
    pub rho: i64,
    pub depth: u32,
    pub index: String,
    pub rho_i: i64,
    pub action: TraceAction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

/// Collects trace events when enabled.
#[derive(Clone, Debug, Default)]
pub struct Tracer {
    pub events: Option<Vec<TraceEvent>>,
}

impl Tracer {
    pub fn off() -> Self {
        Tracer { events: None }
    }

    pub fn on() -> Self {
        Tracer {
            events: Some(Vec::new()),
        }
    }

    fn enabled(&self) -> bool {
        self.events.is_some()
    }

    fn push(&mut self, ev: TraceEvent) {
        if let Some(v) = self.events.as_mut() {
            v.push(ev);
        }
    }

    pub fn take(&mut self) -> Vec<TraceEvent> {
        self.events.as_mut().map(std::mem::take).unwrap_or_default()
    }
}

fn event(phase: Phase, rho: i64, node: &ActiveNode, action: TraceAction) -> TraceEvent {
    TraceEvent {
        phase,
        rho,
        depth: node.interval.depth,
        index: node.interval.index.to_string(),
        rho_i: node.rho(),
        action,
        t_value: None,
        lambda_minus: None,
        lambda_plus: None,
        lambda: None,
    }
}

/// Counters for one run of `dcm_rho` or `certify_rho`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub tree_size: u64,
    pub tree_depth: u32,
    pub bisections: u64,
    /// Smallest `ρ_I` seen at any node.
    pub min_node_precision: Option<i64>,
}

impl PhaseStats {
    fn visit(&mut self, node: &ActiveNode) {
        self.tree_size += 1;
        self.tree_depth = self.tree_depth.max(node.interval.depth);
        self.min_node_precision = Some(
            self.min_node_precision
                .map_or(node.rho(), |m| m.min(node.rho())),
        );
    }
}

/// Result of one `dcm_rho` call.
#[derive(Clone, Debug)]
pub enum DcmOutcome {
    Isolated(DcmRun),
    InsufficientPrecision(DcmRun),
}

impl DcmOutcome {
    pub fn run(&self) -> &DcmRun {
        match self {
            DcmOutcome::Isolated(r) | DcmOutcome::InsufficientPrecision(r) => r,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DcmRun {
    /// Sorted by left endpoint.
    pub records: Vec<IsolatingRecord>,
    pub stats: PhaseStats,
    /// Every node that was bisected, in processing order.
    pub bisected: Vec<NodeInterval>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyOutcome {
    Certified(PhaseStats),
    InsufficientPrecision(PhaseStats),
}

/// How `certify_rho` seeds its worklist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyMode {
    /// Start at the deepest dyadic nodes covering each piece of the region of
    /// uncertainty.
    Seeded,
    /// Start at the root interval.
    FullTree,
}

/// `f̃_{I_0}`: a `(ρ+1)`-binary rounding of `f̃(-1/2 + x)` with `f̃` a
/// `(ρ+n+1)`-binary approximation of `f`.
pub fn initial_node(problem: &ScaledProblem, rho: i64) -> Result<ActiveNode, Error> {
    let f = problem.approx(rho + problem.n as i64 + 1)?;
    let poly = shift_neg_half(&f).round(rho + 1);
    Ok(ActiveNode {
        interval: NodeInterval::root(),
        approx: ApproxPoly {
            poly,
            precision: rho,
        },
    })
}

fn dy(r: &BigInt) -> Dyadic {
    Dyadic::from_int(r.clone())
}

fn dyadic_ratio_f64(num: &Dyadic, den: &BigInt) -> f64 {
    (num.to_rational() / Rational::from_integer(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Sorted, pairwise disjoint record list with neighbor-only overlap checks.
#[derive(Default)]
struct RecordList {
    records: Vec<IsolatingRecord>,
}

impl RecordList {
    fn overlaps(&self, lo: &Rational, hi: &Rational) -> bool {
        let p = self.records.partition_point(|r| r.lo < *lo);
        if p > 0 && *lo < self.records[p - 1].hi {
            return true;
        }
        if p < self.records.len() && self.records[p].lo < *hi {
            return true;
        }
        false
    }

    fn insert(&mut self, r: IsolatingRecord) {
        let p = self.records.partition_point(|x| x.lo < r.lo);
        self.records.insert(p, r);
    }
}

/// Approximate subdivision at working precision `ρ`.
pub fn dcm_rho(problem: &ScaledProblem, rho: i64) -> Result<DcmOutcome, Error> {
    dcm_rho_traced(problem, rho, &mut Tracer::off())
}

pub fn dcm_rho_traced(problem: &ScaledProblem, rho: i64, tracer: &mut Tracer) -> Result<DcmOutcome, Error> {
    let n = problem.n;
    let ni = n as i64;
    let nb = BigInt::from(n as u64);
    let mut out = RecordList::default();
    let mut run = DcmRun::default();
    let mut stack = vec![initial_node(problem, rho)?];

    // n^n and n^(n-k) for evaluating at -1/n
    let mut npow = vec![BigInt::one()];
    for k in 1..=n {
        let next = &npow[k - 1] * &nb;
        npow.push(next);
    }

    while let Some(node) = stack.pop() {
        run.stats.visit(&node);
        let r = node.rho();
        let p = &node.approx.poly;
        let plus = extend_plus_scaled(p, n);
        let den = dy(&plus.den);
        let h = reverse_shift_dyadic(&plus.num, n);
        let thr = &Dyadic::pow2(ni + 2 - r) * &den;
        if classify_dyadics(&h, &thr) != SignClass::Mixed {
            tracer.push(event(Phase::Dcm, rho, &node, TraceAction::Discard));
            continue;
        }
        let t = t_test_at_zero(&p.derivative(), 1);
        let t_thr = -(&Dyadic::from_int(nb.clone()) * &Dyadic::pow2(ni + 1 - r));
        if t > t_thr {
            let mut ev = event(Phase::Dcm, rho, &node, TraceAction::Reject);
            if tracer.enabled() {
                ev.t_value = Some(t.to_f64());
            }
            // λ⁻ D, λ⁺ D with D = (4n)^n
            let lm = &plus.num.coeff(0) - &(&Dyadic::pow2(ni - 1 - r) * &den);
            let lp = &plus.num.sum()
                + &(&(&Dyadic::from_int(4 * n as u64 + 1) * &Dyadic::pow2(ni - 1 - r)) * &den);
            // λ n^n
            let nn = p.nominal_degree();
            let mut acc = Dyadic::zero();
            for k in 0..=nn {
                let term = &p.coeff(k) * &dy(&npow_get(&npow, &nb, nn - k));
                acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            let nn_pow = dy(&npow_get(&npow, &nb, nn));
            let lam = &acc - &(&Dyadic::pow2(ni + 1 - r) * &nn_pow);
            if tracer.enabled() {
                ev.lambda_minus = Some(dyadic_ratio_f64(&lm, &plus.den));
                ev.lambda_plus = Some(dyadic_ratio_f64(&lp, &plus.den));
                ev.lambda = Some(dyadic_ratio_f64(&lam, &npow_get(&npow, &nb, nn)));
            }
            let fhat = p.add_monomial(1, &(&Dyadic::from_int(nb.clone()) * &Dyadic::pow2(ni + 1 - r)));
            let deg = fhat.effective_degree().unwrap_or(0) as i64;

            let b_thr = &(&Dyadic::from_int(nb.clone()) * &Dyadic::pow2(ni + 3 - r)) * &den;
            let min_abs = lm.abs().min(lp.abs());
            let lam_thr = &(&Dyadic::from_int(&nb * &nb) * &Dyadic::pow2(deg + ni + 7 - r)) * &nn_pow;
            let (c, d) = node.interval.tilde(n);
            let ok = lm.signum() * lp.signum() < 0
                && min_abs > b_thr
                && lam.abs() > lam_thr
                && !out.overlaps(&c, &d);
            if ok {
                let bound = (&min_abs - &b_thr).to_rational() / Rational::from_integer(plus.den.clone());
                out.insert(IsolatingRecord {
                    lo: c,
                    hi: d,
                    sign_left: lm.signum() as i8,
                    sign_right: lp.signum() as i8,
                    bound,
                    node: node.interval.clone(),
                    node_precision: r,
                });
                ev.action = TraceAction::Record;
            }
            tracer.push(ev);
        } else {
            if r < 2 {
                tracer.push(event(Phase::Dcm, rho, &node, TraceAction::Insufficient));
                run.records = out.records;
                return Ok(DcmOutcome::InsufficientPrecision(run));
            }
            let mut ev = event(Phase::Dcm, rho, &node, TraceAction::Bisect);
            if tracer.enabled() {
                ev.t_value = Some(t.to_f64());
            }
            tracer.push(ev);
            run.stats.bisections += 1;
            run.bisected.push(node.interval.clone());
            let (l, rr) = node.bisect();
            stack.push(rr);
            stack.push(l);
        }
    }
    run.records = out.records;
    Ok(DcmOutcome::Isolated(run))
}

fn npow_get(cache: &[BigInt], nb: &BigInt, k: usize) -> BigInt {
    cache.get(k).cloned().unwrap_or_else(|| num_traits::pow(nb.clone(), k))
}

/// Deepest node whose closure contains `[lo, hi]`, not deeper than `cap`.
fn covering_node(lo: &Rational, hi: &Rational, cap: u32) -> NodeInterval {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut best = NodeInterval::root();
    for h in 1..=cap {
        let i = scale_pow2(&(lo + &half), h as i64).floor().to_integer();
        let max_i = (BigInt::one() << h as usize) - 1;
        let i = if i > max_i { max_i } else { i };
        let node = NodeInterval::new(h, i);
        if node.lo().to_rational() <= *lo && *hi <= node.hi().to_rational() {
            best = node;
        } else {
            break;
        }
    }
    best
}

fn seed_nodes(region: &RegionOfUncertainty, records: &[IsolatingRecord]) -> Vec<NodeInterval> {
    let mut seeds: Vec<NodeInterval> = Vec::new();
    for piece in &region.pieces {
        let cap = [piece.left_record, piece.right_record]
            .iter()
            .flatten()
            .map(|&k| records[k].node.depth)
            .min()
            .map_or(0, |d| d.saturating_sub(1));
        seeds.push(covering_node(&piece.lo, &piece.hi, cap));
    }
    seeds.sort();
    seeds.dedup();
    let all = seeds.clone();
    seeds.retain(|s| !all.iter().any(|o| o != s && o.is_ancestor_of(s)));
    // Leftmost first, matching the depth-first order of the full tree.
    seeds.sort_by(|a, b| a.lo().cmp(&b.lo()));
    seeds
}

/// Walk from the root to `target` applying the child transforms without tests.
fn descend(root: &ActiveNode, target: &NodeInterval) -> Option<ActiveNode> {
    let mut node = root.clone();
    for level in (0..target.depth).rev() {
        if node.rho() < 2 {
            return None;
        }
        let bit = (&target.index >> level as usize) & BigInt::one();
        let (l, r) = node.bisect();
        node = if bit.is_zero() { l } else { r };
    }
    Some(node)
}

/// Completeness check for the records of `dcm_rho` at the same precision.
pub fn certify_rho(
    problem: &ScaledProblem,
    rho: i64,
    records: &[IsolatingRecord],
    mode: CertifyMode,
) -> Result<CertifyOutcome, Error> {
    certify_rho_traced(problem, rho, records, mode, &mut Tracer::off())
}

pub fn certify_rho_traced(
    problem: &ScaledProblem,
    rho: i64,
    records: &[IsolatingRecord],
    mode: CertifyMode,
    tracer: &mut Tracer,
) -> Result<CertifyOutcome, Error> {
    let n = problem.n;
    let ni = n as i64;
    let nd = Dyadic::from_int(n as u64);
    let mut records = records.to_vec();
    records.sort_by(|a, b| a.lo.cmp(&b.lo));
    let region = region_of_uncertainty(&records);
    let root = initial_node(problem, rho)?;
    let mut stats = PhaseStats::default();
    let mut stack: Vec<ActiveNode> = match mode {
        CertifyMode::FullTree => vec![root],
        CertifyMode::Seeded => {
            let mut v = Vec::new();
            for s in seed_nodes(&region, &records) {
                match descend(&root, &s) {
                    Some(node) => v.push(node),
                    None => return Ok(CertifyOutcome::InsufficientPrecision(stats)),
                }
            }
            v.reverse();
            v
        }
    };

    while let Some(node) = stack.pop() {
        stats.visit(&node);
        let r = node.rho();
        let a = node.interval.lo().to_rational();
        let b = node.interval.hi().to_rational();
        // Clipped pieces of [a, b] ∩ ℛ.
        let clipped: Vec<(Rational, Rational, &UncertainPiece)> = region
            .pieces
            .iter()
            .filter_map(|pc| {
                let lo = if pc.lo > a { pc.lo.clone() } else { a.clone() };
                let hi = if pc.hi < b { pc.hi.clone() } else { b.clone() };
                (lo <= hi).then_some((lo, hi, pc))
            })
            .collect();
        let meets_open = clipped.iter().any(|(lo, hi, _)| lo < hi || (*lo > a && *lo < b));
        if !meets_open {
            tracer.push(event(Phase::Certify, rho, &node, TraceAction::Covered));
            continue;
        }
        let p = &node.approx.poly;
        let t = t_test_at_zero(p, 0);
        let thr3 = &nd * &Dyadic::pow2(2 - r);
        if t > -&thr3 {
            let v = (&p.coeff(0) + &thr3).abs();
            let bound = &(&nd * &nd) * &Dyadic::pow2(5 - r);
            let mut ev = event(Phase::Certify, rho, &node, TraceAction::ExcludeT);
            if tracer.enabled() {
                ev.t_value = Some(t.to_f64());
            }
            if v > bound {
                tracer.push(ev);
                continue;
            }
            ev.action = TraceAction::Insufficient;
            tracer.push(ev);
            return Ok(CertifyOutcome::InsufficientPrecision(stats));
        }
        let hd = reverse_shift_dyadic(&p.derivative(), n);
        let thr4 = &nd * &Dyadic::pow2(ni - r);
        let g = match classify_dyadics(&hd, &thr4) {
            SignClass::AllAboveNegEps => p.add_monomial(1, &thr4),
            SignClass::AllBelowPosEps => p.add_monomial(1, &-&thr4),
            SignClass::Mixed => {
                if r < 2 {
                    tracer.push(event(Phase::Certify, rho, &node, TraceAction::Insufficient));
                    return Ok(CertifyOutcome::InsufficientPrecision(stats));
                }
                tracer.push(event(Phase::Certify, rho, &node, TraceAction::Bisect));
                stats.bisections += 1;
                let (l, rr) = node.bisect();
                stack.push(rr);
                stack.push(l);
                continue;
            }
        };
        let g0 = g.coeff(0).to_rational();
        let g1 = g.sum().to_rational();
        let lam_thr = (&nd * &Dyadic::pow2(ni + 2 - r)).to_rational();
        let rec_val = |k: Option<usize>, left_end: bool| -> Rational {
            match k {
                Some(k) => {
                    let rec = &records[k];
                    let s = if left_end { rec.sign_left } else { rec.sign_right };
                    &rec.bound * Rational::from_integer(s.into())
                }
                None => Rational::zero(),
            }
        };
        let all_ok = clipped.iter().all(|(ql, qr, pc)| {
            let ll = if *ql == a { g0.clone() } else { rec_val(pc.left_record, false) };
            let lr = if *qr == b { g1.clone() } else { rec_val(pc.right_record, true) };
            ll.abs().min(lr.abs()) > lam_thr && (&ll * &lr).is_positive()
        });
        if all_ok {
            tracer.push(event(Phase::Certify, rho, &node, TraceAction::ExcludeMonotone));
        } else {
            tracer.push(event(Phase::Certify, rho, &node, TraceAction::Insufficient));
            return Ok(CertifyOutcome::InsufficientPrecision(stats));
        }
    }
    Ok(CertifyOutcome::Certified(stats))
}

/// Driver configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatorConfig {
    pub initial_precision: i64,
    pub max_precision: i64,
    pub certify_mode: CertifyMode,
}

impl Default for IsolatorConfig {
    fn default() -> Self {
        IsolatorConfig {
            initial_precision: 16,
            max_precision: 1 << 20,
            certify_mode: CertifyMode::Seeded,
        }
    }
}

/// Statistics of one precision attempt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptStats {
    pub rho: i64,
    pub dcm: PhaseStats,
    pub dcm_ok: bool,
    pub records: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certify: Option<PhaseStats>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub attempts: Vec<AttemptStats>,
    pub final_rho: i64,
    pub restarts: usize,
    pub dcm_tree_size: u64,
    pub dcm_tree_depth: u32,
    pub certify_tree_size: u64,
    pub certify_tree_depth: u32,
    pub coefficient_bits: u64,
    pub certify_mode: CertifyMode,
}

/// Isolating interval of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    /// Exact back-scaled `Ĩ`.
    pub lo: Rational,
    pub hi: Rational,
    /// Dyadic enclosure of `(lo, hi)` that still isolates the same root.
    pub lo_dyadic: Dyadic,
    pub hi_dyadic: Dyadic,
    /// Signs of `F` at the endpoints.
    pub sign_left: i8,
    pub sign_right: i8,
}

impl IsolatingInterval {
    pub fn lo_repr(&self) -> DyadicRepr {
        DyadicRepr::from(&self.lo_dyadic)
    }

    pub fn hi_repr(&self) -> DyadicRepr {
        DyadicRepr::from(&self.hi_dyadic)
    }

    /// Whether the open dyadic interval contains `x`.
    pub fn contains(&self, x: &Rational) -> bool {
        self.lo_dyadic.to_rational() < *x && *x < self.hi_dyadic.to_rational()
    }
}

#[derive(Clone, Debug)]
pub struct IsolationResult {
    pub degree: usize,
    pub gamma: i64,
    pub tau_hat: i64,
    pub final_rho: i64,
    /// Sorted, pairwise disjoint.
    pub intervals: Vec<IsolatingInterval>,
    /// Records of the scaled problem behind `intervals`.
    pub records: Vec<IsolatingRecord>,
    pub stats: RunStats,
}

/// Isolate all real roots of `F` with default settings apart from the precisions.
pub fn r_isolate(oracle: &CoefficientOracle, rho0: i64, rho_cap: i64) -> Result<IsolationResult, Error> {
    let cfg = IsolatorConfig {
        initial_precision: rho0,
        max_precision: rho_cap,
        ..IsolatorConfig::default()
    };
    r_isolate_with(oracle, &cfg, &mut Tracer::off())
}

pub fn r_isolate_with(
    oracle: &CoefficientOracle,
    cfg: &IsolatorConfig,
    tracer: &mut Tracer,
) -> Result<IsolationResult, Error> {
    let n = oracle.degree();
    if n == 0 {
        return Err(Error::DegreeTooSmall);
    }
    let tau_hat = tau_bound(oracle)?;
    let gamma = compute_gamma(oracle, tau_hat);
    let problem = make_scaled(oracle.clone(), gamma, tau_hat);
    isolate_scaled(&problem, cfg, tracer)
}

/// Driver on an already scaled problem.
pub fn isolate_scaled(
    problem: &ScaledProblem,
    cfg: &IsolatorConfig,
    tracer: &mut Tracer,
) -> Result<IsolationResult, Error> {
    if cfg.initial_precision < 2 {
        return Err(Error::InvalidPrecision(cfg.initial_precision));
    }
    let bits_before = problem.oracle.bits_requested();
    let lead_sign = problem.oracle.query(problem.n, 2).signum() as i8;
    let mut rho = cfg.initial_precision;
    let mut attempts: Vec<AttemptStats> = Vec::new();
    loop {
        if rho > cfg.max_precision {
            return Err(Error::PrecisionCapExceeded {
                cap: cfg.max_precision,
                attempted: rho,
            });
        }
        let dcm = dcm_rho_traced(problem, rho, tracer)?;
        let mut att = AttemptStats {
            rho,
            dcm: dcm.run().stats.clone(),
            dcm_ok: matches!(dcm, DcmOutcome::Isolated(_)),
            records: dcm.run().records.len(),
            certify: None,
            certified: false,
        };
        if let DcmOutcome::Isolated(run) = dcm {
            let cert = certify_rho_traced(problem, rho, &run.records, cfg.certify_mode, tracer)?;
            match cert {
                CertifyOutcome::Certified(s) => {
                    att.certify = Some(s);
                    att.certified = true;
                    attempts.push(att);
                    let stats = summarize(attempts, rho, problem.oracle.bits_requested() - bits_before, cfg.certify_mode);
                    let intervals = back_scale(&run.records, problem.n, problem.gamma, lead_sign);
                    return Ok(IsolationResult {
                        degree: problem.n,
                        gamma: problem.gamma,
                        tau_hat: problem.tau_hat,
                        final_rho: rho,
                        intervals,
                        records: run.records,
                        stats,
                    });
                }
                CertifyOutcome::InsufficientPrecision(s) => att.certify = Some(s),
            }
        }
        attempts.push(att);
        rho *= 2;
    }
}

fn summarize(attempts: Vec<AttemptStats>, rho: i64, bits: u64, mode: CertifyMode) -> RunStats {
    let last = attempts.last().expect("at least one attempt");
    let cert = last.certify.clone().unwrap_or_default();
    RunStats {
        final_rho: rho,
        restarts: attempts.len() - 1,
        dcm_tree_size: last.dcm.tree_size,
        dcm_tree_depth: last.dcm.tree_depth,
        certify_tree_size: cert.tree_size,
        certify_tree_depth: cert.tree_depth,
        coefficient_bits: bits,
        certify_mode: mode,
        attempts,
    }
}

/// Back-scale records by `2^(Γ+1)` and attach dyadic enclosures.
fn back_scale(records: &[IsolatingRecord], n: usize, gamma: i64, lead_sign: i8) -> Vec<IsolatingInterval> {
    // Rounding inward by less than w/(8n) keeps I⁺, and with it the root,
    // inside the enclosure; the part of Ĩ left out is root free, so the
    // endpoint signs carry over and disjoint records stay disjoint.
    let extra = ceil_log2_u64(8 * n as u64);
    let s = gamma + 1;
    records
        .iter()
        .map(|r| {
            let grid = r.node.depth as i64 + extra;
            IsolatingInterval {
                lo: scale_pow2(&r.lo, s),
                hi: scale_pow2(&r.hi, s),
                lo_dyadic: rational_ceil(&r.lo, grid).shl(s),
                hi_dyadic: rational_floor(&r.hi, grid).shl(s),
                sign_left: r.sign_left * lead_sign,
                sign_right: r.sign_right * lead_sign,
            }
        })
        .collect()
}

impl PartialOrd for IsolatingInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.lo.cmp(&other.lo))
    }
}
