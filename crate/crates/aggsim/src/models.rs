//! The 26 propagation update rules.
//!
//! Every rule is a pure function: given the influenced node's view of one
//! interaction it returns the node's next score. Pairwise families (Voter,
//! Deffuant, HK) look only at the interacting pair; neighborhood families
//! (DeGroot, FJ and the avg variants) fold over the whole neighborhood.

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// One multiplicative factor A_x from the catalog: 1, w_ij, a power score,
/// or a weight-power product. The role (self vs other) is baked into the
/// kind, so evaluation needs no extra flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorKind {
    One,
    W,
    PSelf,
    POther,
    WPSelf,
    WPOther,
}

impl SelectorKind {
    /// Evaluates the factor against a single (weight, P_i, P_j) triple.
    pub fn value(self, weight: f64, power_self: f64, power_other: f64) -> f64 {
        match self {
            SelectorKind::One => 1.0,
            SelectorKind::W => weight,
            SelectorKind::PSelf => power_self,
            SelectorKind::POther => power_other,
            SelectorKind::WPSelf => weight * power_self,
            SelectorKind::WPOther => weight * power_other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    Voter,
    Deffuant,
    Hk,
    DeGroot,
    Fj,
    AvgDeGroot,
    AvgFj,
}

/// One catalog entry; `name` is the canonical CLI string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub name: &'static str,
    pub family: ModelFamily,
    /// A_i
    pub self_selector: SelectorKind,
    /// A_j; for per-neighbor folds it is re-evaluated with each
    /// neighbor's own weight and power.
    pub other_selector: SelectorKind,
    /// Confidence bound; present exactly for the HK family.
    pub d: Option<f64>,
}

impl ModelSpec {
    const fn def(
        name: &'static str,
        family: ModelFamily,
        self_selector: SelectorKind,
        other_selector: SelectorKind,
        d: Option<f64>,
    ) -> Self {
        ModelSpec {
            name,
            family,
            self_selector,
            other_selector,
            d,
        }
    }

    /// Whether the update needs the full neighborhood or just the pair.
    pub fn is_neighborhood(&self) -> bool {
        matches!(
            self.family,
            ModelFamily::DeGroot | ModelFamily::Fj | ModelFamily::AvgDeGroot | ModelFamily::AvgFj
        )
    }
}

use ModelFamily as F;
use SelectorKind as S;

static CATALOG: [ModelSpec; 26] = [
    ModelSpec::def("Voter", F::Voter, S::One, S::One, None),
    ModelSpec::def("Voter_W", F::Voter, S::One, S::W, None),
    ModelSpec::def("Voter_P", F::Voter, S::One, S::POther, None),
    ModelSpec::def("Voter_WP", F::Voter, S::One, S::WPOther, None),
    ModelSpec::def("Deffuant_W", F::Deffuant, S::W, S::W, None),
    ModelSpec::def("Deffuant_P", F::Deffuant, S::PSelf, S::POther, None),
    ModelSpec::def("Deffuant_WP", F::Deffuant, S::WPSelf, S::WPOther, None),
    ModelSpec::def("HK_0.5_W", F::Hk, S::W, S::W, Some(0.5)),
    ModelSpec::def("HK_0.5_P", F::Hk, S::PSelf, S::POther, Some(0.5)),
    ModelSpec::def("HK_0.5_WP", F::Hk, S::WPSelf, S::WPOther, Some(0.5)),
    ModelSpec::def("HK_1.0_W", F::Hk, S::W, S::W, Some(1.0)),
    ModelSpec::def("HK_1.0_P", F::Hk, S::PSelf, S::POther, Some(1.0)),
    ModelSpec::def("HK_1.0_WP", F::Hk, S::WPSelf, S::WPOther, Some(1.0)),
    ModelSpec::def("DeGroot", F::DeGroot, S::One, S::One, None),
    ModelSpec::def("DeGroot_W", F::DeGroot, S::W, S::W, None),
    ModelSpec::def("DeGroot_P", F::DeGroot, S::PSelf, S::POther, None),
    ModelSpec::def("DeGroot_WP", F::DeGroot, S::WPSelf, S::WPOther, None),
    ModelSpec::def("FJ_W", F::Fj, S::W, S::W, None),
    ModelSpec::def("FJ_P", F::Fj, S::PSelf, S::POther, None),
    ModelSpec::def("FJ_WP", F::Fj, S::WPSelf, S::WPOther, None),
    ModelSpec::def("avgDeGroot_W", F::AvgDeGroot, S::W, S::W, None),
    ModelSpec::def("avgDeGroot_P", F::AvgDeGroot, S::PSelf, S::POther, None),
    ModelSpec::def("avgDeGroot_WP", F::AvgDeGroot, S::WPSelf, S::WPOther, None),
    ModelSpec::def("avgFJ_W", F::AvgFj, S::W, S::W, None),
    ModelSpec::def("avgFJ_P", F::AvgFj, S::PSelf, S::POther, None),
    ModelSpec::def("avgFJ_WP", F::AvgFj, S::WPSelf, S::WPOther, None),
];

/// All 26 models in catalog order.
pub fn model_catalog() -> &'static [ModelSpec] {
    &CATALOG
}

/// Looks up a model by its exact canonical name.
pub fn find_model(name: &str) -> Result<&'static ModelSpec> {
    CATALOG.iter().find(|m| m.name == name).ok_or_else(|| {
        let valid = CATALOG
            .iter()
            .map(|m| m.name)
            .collect::<Vec<_>>()
            .join(", ");
        Error::UnknownModel {
            name: name.to_string(),
            valid,
        }
    })
}

/// One neighbor as seen from the influenced node: its current score plus
/// the pair-specific weight w_ij and its power score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborView {
    pub id: NodeId,
    pub score: f64,
    pub weight: f64,
    pub power: f64,
}

/// Everything a rule may read about one interaction.
#[derive(Debug, Clone, Copy)]
pub struct UpdateContext<'a> {
    pub influenced: NodeId,
    pub influencer: NodeId,
    /// S_i^t
    pub score_self: f64,
    /// S_j^t
    pub score_other: f64,
    /// S_i^0
    pub initial_self: f64,
    /// w_ij of the interacting pair
    pub edge_weight: f64,
    /// P_i
    pub power_self: f64,
    /// P_j
    pub power_other: f64,
    /// All of N_i; pairwise families ignore this.
    pub neighbors: &'a [NeighborView],
}

impl UpdateContext<'_> {
    fn a_self(&self, spec: &ModelSpec) -> f64 {
        spec.self_selector
            .value(self.edge_weight, self.power_self, self.power_other)
    }

    fn a_other_pair(&self, spec: &ModelSpec) -> f64 {
        spec.other_selector
            .value(self.edge_weight, self.power_self, self.power_other)
    }

    fn a_other_for(&self, spec: &ModelSpec, nbr: &NeighborView) -> f64 {
        spec.other_selector
            .value(nbr.weight, self.power_self, nbr.power)
    }
}

/// Result of one update: the new score plus whether the rule actually
/// fired (only HK's confidence bound can veto).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Update {
    pub score: f64,
    pub applied: bool,
}

pub fn voter_update(spec: &ModelSpec, ctx: &UpdateContext) -> f64 {
    ctx.a_other_pair(spec) * ctx.score_other
}

pub fn deffuant_update(spec: &ModelSpec, ctx: &UpdateContext) -> f64 {
    let raw = ctx.a_self(spec) * ctx.score_self + ctx.a_other_pair(spec) * ctx.score_other;
    raw / raw.max(1.0)
}

/// Deffuant update gated by the confidence bound: fires only when the
/// weighted opinions are closer than d.
pub fn hk_update(spec: &ModelSpec, ctx: &UpdateContext) -> Update {
    let d = spec.d.expect("HK model without a confidence bound");
    let gap = (ctx.a_self(spec) * ctx.score_self - ctx.a_other_pair(spec) * ctx.score_other).abs();
    if gap < d {
        Update {
            score: deffuant_update(spec, ctx),
            applied: true,
        }
    } else {
        Update {
            score: ctx.score_self,
            applied: false,
        }
    }
}

/// Weighted-mean accumulator. The quotient is clamped to the range of the
/// participating scores so that exact fixed points survive floating-point
/// rounding (a uniform neighborhood must map to exactly itself).
struct Mix {
    num: f64,
    den: f64,
    lo: f64,
    hi: f64,
}

impl Mix {
    fn new() -> Self {
        Mix {
            num: 0.0,
            den: 0.0,
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, coeff: f64, score: f64) {
        self.num += coeff * score;
        self.den += coeff;
        self.lo = self.lo.min(score);
        self.hi = self.hi.max(score);
    }

    fn resolve(self, unchanged: f64) -> f64 {
        if self.den == 0.0 {
            unchanged
        } else {
            (self.num / self.den).clamp(self.lo, self.hi)
        }
    }
}

pub fn degroot_update(spec: &ModelSpec, ctx: &UpdateContext) -> f64 {
    let mut mix = Mix::new();
    mix.add(ctx.a_self(spec), ctx.score_self);
    for nbr in ctx.neighbors {
        mix.add(ctx.a_other_for(spec, nbr), nbr.score);
    }
    mix.resolve(ctx.score_self)
}

pub fn fj_update(spec: &ModelSpec, ctx: &UpdateContext) -> f64 {
    let a_self = ctx.a_self(spec);
    let mut mix = Mix::new();
    mix.add(a_self, ctx.initial_self);
    mix.add(a_self, ctx.score_self);
    for nbr in ctx.neighbors {
        mix.add(ctx.a_other_for(spec, nbr), nbr.score);
    }
    mix.resolve(ctx.score_self)
}

/// Mean with the same exactness guard as `Mix`: clamped to the input range.
fn clamped_mean(sum: f64, count: usize, lo: f64, hi: f64) -> f64 {
    (sum / count as f64).clamp(lo, hi)
}

pub fn avg_degroot_update(spec: &ModelSpec, ctx: &UpdateContext) -> f64 {
    let n = ctx.neighbors.len();
    let a_self = ctx.a_self(spec);

    let mut sel_sum = a_self;
    let (mut sel_lo, mut sel_hi) = (a_self, a_self);
    let mut score_sum = ctx.score_self;
    let (mut score_lo, mut score_hi) = (ctx.score_self, ctx.score_self);
    for nbr in ctx.neighbors {
        let a = ctx.a_other_for(spec, nbr);
        sel_sum += a;
        sel_lo = sel_lo.min(a);
        sel_hi = sel_hi.max(a);
        score_sum += nbr.score;
        score_lo = score_lo.min(nbr.score);
        score_hi = score_hi.max(nbr.score);
    }
    let avg_sel = clamped_mean(sel_sum, 1 + n, sel_lo, sel_hi);
    let avg_score = clamped_mean(score_sum, 1 + n, score_lo, score_hi);
    (avg_sel * avg_score).clamp(0.0, 1.0)
}

pub fn avg_fj_update(spec: &ModelSpec, ctx: &UpdateContext) -> f64 {
    let n = ctx.neighbors.len();
    let a_self = ctx.a_self(spec);

    let mut sel_sum = 2.0 * a_self;
    let (mut sel_lo, mut sel_hi) = (a_self, a_self);
    let mut score_sum = ctx.initial_self + ctx.score_self;
    let mut score_lo = ctx.initial_self.min(ctx.score_self);
    let mut score_hi = ctx.initial_self.max(ctx.score_self);
    for nbr in ctx.neighbors {
        let a = ctx.a_other_for(spec, nbr);
        sel_sum += a;
        sel_lo = sel_lo.min(a);
        sel_hi = sel_hi.max(a);
        score_sum += nbr.score;
        score_lo = score_lo.min(nbr.score);
        score_hi = score_hi.max(nbr.score);
    }
    let avg_sel = clamped_mean(sel_sum, 2 + n, sel_lo, sel_hi);
    let avg_score = clamped_mean(score_sum, 2 + n, score_lo, score_hi);
    (avg_sel * avg_score).clamp(0.0, 1.0)
}

/// Dispatches one interaction to the model's update rule.
pub fn apply_model(spec: &ModelSpec, ctx: &UpdateContext) -> Update {
    let score = match spec.family {
        F::Voter => voter_update(spec, ctx),
        F::Deffuant => deffuant_update(spec, ctx),
        F::Hk => return hk_update(spec, ctx),
        F::DeGroot => degroot_update(spec, ctx),
        F::Fj => fj_update(spec, ctx),
        F::AvgDeGroot => avg_degroot_update(spec, ctx),
        F::AvgFj => avg_fj_update(spec, ctx),
    };
    Update { score, applied: true }
}
