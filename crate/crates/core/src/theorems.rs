//! Named verifications over a chosen field, each producing a report with
//! computed quantities and a witness on failure.

use std::cell::OnceCell;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::aut::{
    comb_aut_group, ddc_factors, enumerate_fundaments, enumerate_roots, inner_graph_property, inner_tree_check,
    proj_aut_group, subspace_images, thmcp_factors, tree_factors, ProjAut,
};
use crate::error::{Error, Result};
use crate::field::FField;
use crate::graph::{read_graph, LooseGraph, LooseMorphism};
use crate::matrices::compose_check;
use crate::perm::PermGroup;
use crate::sample::{all_morphisms, random_morphism_from, small_graphs};
use crate::scheme::{
    build_scheme, classify_lines, convexity_check, decompose, enumerate_subspaces, subgraph_span_dim,
    SchemeModel, MAX_SUBSPACE_DIM,
};

pub const DEFAULT_SEED: u64 = 0xF1F1;
/// Random composable pairs drawn per functoriality check.
pub const FUNCTORIALITY_PAIRS: usize = 100;
const MORPHISM_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Functoriality,
    Transroot,
    Transfund,
    Ddc,
    ToyEqual,
    Thmcp,
    KernelTrivial,
    Cenprod,
    InnerTree,
    LemfieldQuotient,
    Mttrees,
    AutcombEq,
    ObsSubspaces,
    Convexity,
    SpanLemma,
    Decompose,
    Igp,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Functoriality,
        TheoremId::Transroot,
        TheoremId::Transfund,
        TheoremId::Ddc,
        TheoremId::ToyEqual,
        TheoremId::Thmcp,
        TheoremId::KernelTrivial,
        TheoremId::Cenprod,
        TheoremId::InnerTree,
        TheoremId::LemfieldQuotient,
        TheoremId::Mttrees,
        TheoremId::AutcombEq,
        TheoremId::ObsSubspaces,
        TheoremId::Convexity,
        TheoremId::SpanLemma,
        TheoremId::Decompose,
        TheoremId::Igp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Functoriality => "functoriality",
            TheoremId::Transroot => "transroot",
            TheoremId::Transfund => "transfund",
            TheoremId::Ddc => "ddc",
            TheoremId::ToyEqual => "toy-equal",
            TheoremId::Thmcp => "thmcp",
            TheoremId::KernelTrivial => "kernel-trivial",
            TheoremId::Cenprod => "cenprod",
            TheoremId::InnerTree => "inner-tree",
            TheoremId::LemfieldQuotient => "lemfield-quotient",
            TheoremId::Mttrees => "mttrees",
            TheoremId::AutcombEq => "autcomb-eq",
            TheoremId::ObsSubspaces => "obs-subspaces",
            TheoremId::Convexity => "convexity",
            TheoremId::SpanLemma => "span-lemma",
            TheoremId::Decompose => "decompose",
            TheoremId::Igp => "igp",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown theorem `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    /// Quantities published without a pass/fail reading.
    Reported,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
            Verdict::Reported => "reported",
        })
    }
}

/// Where a number comes from: stated by the theory being checked, computed
/// here, or evident.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Theory,
    Derived,
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub graph: String,
    pub q: usize,
    pub verdict: Verdict,
    /// The decidable check standing in for the statement.
    pub surrogate: String,
    pub quantities: Vec<Quantity>,
    pub witness: Option<String>,
    pub reason: Option<String>,
}

impl TheoremReport {
    fn new(theorem: TheoremId, graph: &str, q: usize, surrogate: &str) -> Self {
        TheoremReport {
            theorem,
            graph: graph.to_string(),
            q,
            verdict: Verdict::Pass,
            surrogate: surrogate.to_string(),
            quantities: Vec::new(),
            witness: None,
            reason: None,
        }
    }

    fn skipped(theorem: TheoremId, graph: &str, q: usize, reason: String) -> Self {
        let mut r = TheoremReport::new(theorem, graph, q, "");
        r.verdict = Verdict::Skipped;
        r.reason = Some(reason);
        r
    }

    fn put(&mut self, name: &str, value: impl ToString, provenance: Provenance) {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value: value.to_string(),
            provenance,
        });
    }

    fn derived(&mut self, name: &str, value: impl ToString) {
        self.put(name, value, Provenance::Derived);
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok && self.verdict != Verdict::Fail {
            self.verdict = Verdict::Fail;
            self.witness = Some(witness());
        }
    }

    pub fn quantity(&self, name: &str) -> Option<&str> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Extension bound for constructible tests; the number of coordinates when unset.
    pub ext_bound: Option<usize>,
    /// Expected value of the inner graph property, when known.
    pub expected_igp: Option<bool>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            ext_bound: None,
            expected_igp: None,
        }
    }
}

/// A graph over a field with its groups computed on demand.
pub struct Context {
    pub name: String,
    pub graph: LooseGraph,
    pub field: FField,
    pub options: VerifyOptions,
    scheme: OnceCell<SchemeModel>,
    proj: OnceCell<ProjAut>,
    comb: OnceCell<PermGroup>,
}

impl Context {
    pub fn new(name: &str, graph: LooseGraph, q: usize, options: VerifyOptions) -> Result<Self> {
        Ok(Context {
            name: name.to_string(),
            graph,
            field: FField::new(q)?,
            options,
            scheme: OnceCell::new(),
            proj: OnceCell::new(),
            comb: OnceCell::new(),
        })
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn scheme(&self) -> Result<&SchemeModel> {
        if let Some(s) = self.scheme.get() {
            return Ok(s);
        }
        let mut s = build_scheme(&self.graph, &self.field)?;
        if let Some(r) = self.options.ext_bound {
            s = s.with_ext_bound(r)?;
        }
        Ok(self.scheme.get_or_init(|| s))
    }

    pub fn proj(&self) -> Result<&ProjAut> {
        if let Some(a) = self.proj.get() {
            return Ok(a);
        }
        let a = proj_aut_group(self.scheme()?)?;
        Ok(self.proj.get_or_init(|| a))
    }

    pub fn comb(&self) -> Result<&PermGroup> {
        if let Some(c) = self.comb.get() {
            return Ok(c);
        }
        let c = comb_aut_group(&classify_lines(self.scheme()?)?)?;
        Ok(self.comb.get_or_init(|| c))
    }
}

fn toy_shaped(g: &LooseGraph) -> bool {
    g.vertex_count() == 2
        && g.edges().len() == 3
        && g.adjacent(0, 1)
        && (0..2).all(|v| {
            let d = g.decoration(v);
            (d.e, d.l, d.i) == (0, 1, 1)
        })
}

/// `(a, b, c, d)` for a loose tree with exactly two inner vertices `x ~ y`:
/// `a = deg y`, `b = deg x`, and `c`, `d` count the edges to end vertices at
/// `y` and `x`.
pub fn fundament_type(g: &LooseGraph) -> Option<(usize, usize, usize, usize)> {
    let inner = g.inner_vertices();
    if !g.is_loose_tree() || inner.len() != 2 || !g.adjacent(inner[0], inner[1]) {
        return None;
    }
    let (x, y) = (inner[0], inner[1]);
    Some((g.degree(y), g.degree(x), g.decoration(y).e, g.decoration(x).e))
}

/// Why `id` does not apply to `g`, if it does not.
pub fn inapplicable(id: TheoremId, g: &LooseGraph) -> Option<String> {
    let inner = g.inner_vertices().len();
    let tree = g.is_loose_tree();
    match id {
        TheoremId::Ddc | TheoremId::ToyEqual | TheoremId::Thmcp | TheoremId::Transroot => {
            (!toy_shaped(g)).then(|| "needs two adjacent vertices with one free-ended edge each".into())
        }
        TheoremId::Transfund => {
            fundament_type(g).is_none().then(|| "needs a loose tree with two adjacent inner vertices".into())
        }
        TheoremId::KernelTrivial | TheoremId::LemfieldQuotient | TheoremId::Convexity => {
            (!tree).then(|| "needs a loose tree".into())
        }
        TheoremId::Cenprod | TheoremId::InnerTree | TheoremId::Mttrees | TheoremId::AutcombEq => {
            if !tree {
                Some("needs a loose tree".into())
            } else if inner < 2 {
                Some(format!("needs at least two inner vertices, found {inner}"))
            } else {
                None
            }
        }
        TheoremId::Igp => (inner < 2).then(|| format!("needs at least two inner vertices, found {inner}")),
        TheoremId::ObsSubspaces => (g.vertex_count() == 0).then(|| "empty scheme".into()),
        TheoremId::Functoriality | TheoremId::SpanLemma | TheoremId::Decompose => None,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FunctorialityReport {
    pub checked: usize,
    /// Pairs whose composite would contract an edge with a free end.
    pub not_composable: usize,
    pub failure: Option<String>,
}

fn record(rep: &mut FunctorialityReport, f: &LooseMorphism, g: &LooseMorphism) -> Result<()> {
    if f.then(g).is_err() {
        rep.not_composable += 1;
        return Ok(());
    }
    rep.checked += 1;
    let c = compose_check(f, g)?;
    if !c.ok && rep.failure.is_none() {
        rep.failure = Some(format!(
            "composite {:?} vs product {:?}",
            c.composite.row_strings(),
            c.product.row_strings()
        ));
    }
    Ok(())
}

/// Random composable pairs starting at `src`, drawn with a fixed seed.
pub fn functoriality_random(src: &LooseGraph, seed: u64, pairs: usize, max_vertices: usize) -> Result<FunctorialityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FunctorialityReport::default();
    while rep.checked < pairs {
        let f = random_morphism_from(&mut rng, src, max_vertices);
        let g = random_morphism_from(&mut rng, &f.target, max_vertices);
        record(&mut rep, &f, &g)?;
    }
    Ok(rep)
}

/// Every pair `src → B → C` with `B`, `C` from the small graph family.
pub fn functoriality_exhaustive(src: &LooseGraph) -> Result<FunctorialityReport> {
    let family = small_graphs();
    let mut rep = FunctorialityReport::default();
    for b in &family {
        let fs = all_morphisms(src, b, MORPHISM_LIMIT)?;
        if fs.is_empty() {
            continue;
        }
        for c in &family {
            let gs = all_morphisms(b, c, MORPHISM_LIMIT)?;
            for f in &fs {
                for g in &gs {
                    record(&mut rep, f, g)?;
                }
            }
        }
    }
    Ok(rep)
}

fn big(n: &BigUint) -> String {
    n.to_string()
}

/// Runs one theorem check in `ctx`. Unmet preconditions are input errors.
pub fn verify_in(ctx: &Context, id: TheoremId) -> Result<TheoremReport> {
    if let Some(reason) = inapplicable(id, &ctx.graph) {
        return Err(Error::Input(format!("{id} on {}: {reason}", ctx.name)));
    }
    let (name, q) = (ctx.name.as_str(), ctx.q());
    let mut r;
    match id {
        TheoremId::Functoriality => {
            r = TheoremReport::new(id, name, q, "global matrices over F2: composite equals product");
            let rnd = functoriality_random(&ctx.graph, ctx.options.seed, FUNCTORIALITY_PAIRS, 6)?;
            r.derived("random pairs", rnd.checked);
            r.check(rnd.failure.is_none(), || rnd.failure.clone().unwrap_or_default());
            if ctx.graph.vertex_count() <= 3 {
                let ex = functoriality_exhaustive(&ctx.graph)?;
                r.derived("exhaustive pairs", ex.checked);
                r.derived("not composable", ex.not_composable);
                r.check(ex.failure.is_none(), || ex.failure.clone().unwrap_or_default());
            }
        }
        TheoremId::Transroot => {
            r = TheoremReport::new(id, name, q, "orbit count of PΓL_4(q) on all roots");
            let (roots, orb) = enumerate_roots(&ctx.field)?;
            r.derived("roots", roots.len());
            r.derived("orbits", orb.orbits);
            r.put("expected orbits", 1, Provenance::Theory);
            r.check(orb.orbits == 1, || format!("orbit sizes {:?}", orb.orbit_sizes));
        }
        TheoremId::Transfund => {
            let (a, b, c, d) = fundament_type(&ctx.graph).expect("checked applicable");
            r = TheoremReport::new(id, name, q, "orbit count of PΓL_{a+b}(q) on fundaments with ends");
            r.derived("type", format!("({a},{b};{c},{d})"));
            let (fs, orb) = enumerate_fundaments(a, b, c, d, &ctx.field)?;
            r.derived("fundaments", fs.len());
            r.derived("orbits", orb.orbits);
            r.put("expected orbits", 1, Provenance::Theory);
            r.check(orb.orbits == 1, || format!("orbit sizes {:?}", orb.orbit_sizes));
        }
        TheoremId::Ddc => {
            r = TheoremReport::new(id, name, q, "subgroup orders, normality and |G| = |D|^2 |C| 2");
            let f = ddc_factors(ctx.scheme()?, ctx.proj()?)?;
            r.derived("|D| first", &f.d_first);
            r.derived("|E|", &f.e);
            r.derived("|D| in E", &f.d_in_e);
            r.derived("|C|", &f.c);
            r.derived("|G_(x,y)|", &f.vertex_fixer);
            r.derived("|G|", &f.group);
            r.put("expected |D|", q * (q - 1), Provenance::Theory);
            r.put("expected |C|", (q - 1) * ctx.field.degree(), Provenance::Theory);
            let expect_d = (q * (q - 1)).to_string();
            let expect_c = ((q - 1) * ctx.field.degree()).to_string();
            r.check(f.pass, || format!("{f:?}"));
            r.check(f.d_first == expect_d && f.c == expect_c, || format!("{f:?}"));
        }
        TheoremId::ToyEqual | TheoremId::AutcombEq => {
            r = TheoremReport::new(id, name, q, "equality of point permutation groups");
            let proj = &ctx.proj()?.on_points;
            let comb = ctx.comb()?;
            r.derived("|Aut^proj|", big(&proj.order()));
            r.derived("|Aut^comb|", big(&comb.order()));
            r.check(proj.is_subgroup_of(comb), || "a projective generator is not combinatorial".into());
            r.check(comb.same_group(proj), || {
                comb.generators()
                    .iter()
                    .find(|g| !proj.contains(g))
                    .map(|g| g.to_string())
                    .unwrap_or_default()
            });
        }
        TheoremId::Thmcp => {
            r = TheoremReport::new(id, name, q, "pairwise commuting factors generating the group");
            let t = thmcp_factors(ctx.scheme()?, ctx.proj()?)?;
            r.derived("|A|", &t.a);
            r.derived("|B|", &t.b);
            r.derived("|PGL_(x,y)|", &t.vertex_fixer);
            r.derived("|A ∩ B|", t.product.overlaps.first().map_or("-".into(), |o| o.2.clone()));
            r.check(t.pass, || format!("{:?}", t.product.witness));
        }
        TheoremId::KernelTrivial => {
            r = TheoremReport::new(id, name, q, "order of the kernel of the action on rational points");
            let a = ctx.proj()?;
            r.derived("kernel order", big(&a.kernel_order()));
            r.put("expected kernel order", 1, Provenance::Theory);
            r.check(a.kernel_order() == BigUint::from(1u32), || {
                format!("group {} acts as {}", a.order(), a.on_points.order())
            });
        }
        TheoremId::Cenprod | TheoremId::Mttrees => {
            let surrogate = if id == TheoremId::Cenprod {
                "S(w) pairwise commute and generate the linear stabilizer of the inner points"
            } else {
                "normal series order factorization"
            };
            r = TheoremReport::new(id, name, q, surrogate);
            let tf = tree_factors(ctx.scheme()?, ctx.proj()?)?;
            for (w, o) in &tf.s_w {
                r.derived(&format!("|S({w})|"), o);
            }
            r.derived("|prod S(w)|", &tf.product_order);
            if id == TheoremId::Cenprod {
                r.derived("generated order", &tf.cenprod.generated_order);
                r.check(tf.cenprod.pairwise_commute, || match &tf.cenprod.witness {
                    Some((i, j, _, _)) => format!("S({}) and S({}) do not commute", tf.s_w[*i].0, tf.s_w[*j].0),
                    None => "commutator is not trivial".into(),
                });
                r.check(tf.cenprod.generates, || format!("generated order {}", tf.cenprod.generated_order));
            } else {
                r.derived("|T(I) action|", &tf.tree_action_order);
                r.derived("|semilinear quotient|", &tf.quotient_order);
                r.derived("|Aut^proj|", &tf.group_order);
                r.check(tf.series.normal, || format!("{:?}", tf.series.witness));
                r.check(tf.pass, || format!("residual {}", tf.series.residual_order));
            }
        }
        TheoremId::InnerTree => {
            r = TheoremReport::new(id, name, q, "stabilization of the embedded inner tree and induced action");
            let proj = inner_tree_check(ctx.scheme()?, &ctx.proj()?.on_points)?;
            let comb = inner_tree_check(ctx.scheme()?, ctx.comb()?)?;
            r.derived("|induced action|", &proj.induced_order);
            r.derived("|Aut(T(I))| decorated", &proj.decorated_order);
            r.derived("|Aut(T(I))| undecorated", &proj.underlying_order);
            r.derived("matches undecorated", proj.matches_underlying);
            r.check(proj.stabilizes && comb.stabilizes, || {
                proj.witness.clone().or(comb.witness.clone()).unwrap_or_default()
            });
            r.check(proj.pass && comb.pass, || "induced action differs from the decorated tree group".into());
        }
        TheoremId::LemfieldQuotient => {
            r = TheoremReport::new(id, name, q, "order of PΓL/PGL stabilizer quotient");
            let a = ctx.proj()?;
            let quot = a.quotient_order();
            let (units, galois) = (q - 1, ctx.field.degree());
            r.derived("quotient order", big(&quot));
            r.put("|k^x|", units, Provenance::Trivial);
            r.put("|Aut(k)|", galois, Provenance::Trivial);
            let (u, g) = (quot == BigUint::from(units), quot == BigUint::from(galois));
            if !u && !g {
                r.check(false, || format!("quotient {quot} matches neither reading"));
            } else if !(u && g) {
                r.verdict = Verdict::Reported;
                r.reason = Some(format!(
                    "quotient {quot} equals {}",
                    if u { "|k^x|" } else { "|Aut(k)|" }
                ));
            }
        }
        TheoremId::ObsSubspaces => {
            r = TheoremReport::new(id, name, q, "generator images of contained subspaces");
            let s = ctx.scheme()?;
            let dmax = (s.m().saturating_sub(1)).min(MAX_SUBSPACE_DIM);
            let rank = enumerate_subspaces(s, dmax)?;
            r.derived("double rank", format!("({},{})", rank.r, rank.s));
            r.derived("affine counts", format!("{:?}", rank.affine_counts()));
            r.derived("projective counts", format!("{:?}", rank.projective_counts()));
            let bad = subspace_images(ctx.comb()?, &rank);
            r.check(bad.is_none(), || format!("{bad:?}"));
        }
        TheoremId::Convexity => {
            r = TheoremReport::new(id, name, q, "every qualifying secant meets the scheme in two points");
            let c = convexity_check(&ctx.graph, &ctx.field)?;
            r.derived("pairs", c.pairs_checked);
            r.check(c.ok, || format!("{:?}", c.counterexample));
        }
        TheoremId::SpanLemma => {
            r = TheoremReport::new(id, name, q, "span dimension of every completion vertex subset");
            let m = ctx.graph.completion().vertex_count();
            if m > 16 {
                return Err(Error::Budget(format!("{m} completion vertices")));
            }
            for mask in 1u32..(1 << m) {
                let sub: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                let d = subgraph_span_dim(&ctx.graph, &sub)?;
                r.check(d == sub.len() as isize - 1, || format!("{sub:?} spans dimension {d}"));
            }
            r.derived("subsets", (1u64 << m) - 1);
        }
        TheoremId::Decompose => {
            r = TheoremReport::new(id, name, q, "disjoint pieces covering PG(m-1, q)");
            let d = decompose(&ctx.graph, &ctx.field)?;
            r.derived("scheme", d.scheme);
            r.derived("complement", d.complement);
            r.derived("rest", d.rest);
            r.put("total", d.total, Provenance::Trivial);
            r.check(d.disjoint, || "scheme and complement overlap".into());
            r.check(d.scheme + d.complement + d.rest == d.total, || "sizes do not add up".into());
        }
        TheoremId::Igp => {
            r = TheoremReport::new(id, name, q, "generators of both groups stabilize the embedded inner graph");
            let rep = inner_graph_property(ctx.scheme()?, ctx.comb()?, &ctx.proj()?.on_points)?;
            r.derived("holds", rep.holds);
            r.derived("combinatorial", rep.comb);
            r.derived("projective", rep.proj);
            let expected = ctx.options.expected_igp.unwrap_or(true);
            r.put("expected", expected, Provenance::Theory);
            r.check(rep.holds == expected, || rep.witness.clone().unwrap_or_else(|| "property holds".into()));
        }
    }
    Ok(r)
}

/// Builds a context for `g` over `F_q` and runs one check.
pub fn verify(id: TheoremId, g: &LooseGraph, name: &str, q: usize, options: &VerifyOptions) -> Result<TheoremReport> {
    let ctx = Context::new(name, g.clone(), q, options.clone())?;
    verify_in(&ctx, id)
}

/// One corpus entry.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub path: PathBuf,
    pub tree: Option<bool>,
    pub inner: Option<usize>,
    pub igp: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Manifest {
    pub entries: Vec<CorpusEntry>,
}

fn flag_bool(v: &str, line: usize) -> Result<Option<bool>> {
    match v {
        "yes" | "true" => Ok(Some(true)),
        "no" | "false" => Ok(Some(false)),
        "-" => Ok(None),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected yes, no or -, got `{v}`"),
        }),
    }
}

impl Manifest {
    /// Lines `<path> [tree=yes|no] [inner=N] [igp=true|false]`, with `#`
    /// comments; paths are relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let file = words.next().expect("nonempty line");
            let path = base.join(file);
            let name = Path::new(file)
                .file_stem()
                .map_or(file.to_string(), |s| s.to_string_lossy().into_owned());
            let mut e = CorpusEntry {
                name,
                path,
                tree: None,
                inner: None,
                igp: None,
            };
            for w in words {
                let (k, v) = w.split_once('=').ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("expected key=value, got `{w}`"),
                })?;
                match k {
                    "tree" => e.tree = flag_bool(v, i + 1)?,
                    "igp" => e.igp = flag_bool(v, i + 1)?,
                    "inner" => {
                        e.inner = Some(v.parse().map_err(|_| Error::Parse {
                            line: i + 1,
                            msg: format!("bad inner count `{v}`"),
                        })?)
                    }
                    _ => {
                        return Err(Error::Parse {
                            line: i + 1,
                            msg: format!("unknown key `{k}`"),
                        })
                    }
                }
            }
            entries.push(e);
        }
        Ok(Manifest { entries })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Manifest::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub reports: Vec<TheoremReport>,
    /// Mismatches between the manifest's flags and the graphs.
    pub manifest_errors: Vec<String>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.reports.iter().filter(|r| r.verdict == v).count()
    }
}

fn run_cell(ctx: &Context, ids: &[TheoremId]) -> Vec<TheoremReport> {
    let (name, q) = (ctx.name.as_str(), ctx.q());
    ids.iter()
        .map(|&id| {
            if let Some(reason) = inapplicable(id, &ctx.graph) {
                return TheoremReport::skipped(id, name, q, reason);
            }
            match verify_in(ctx, id) {
                Ok(r) => r,
                Err(Error::Budget(msg)) => TheoremReport::skipped(id, name, q, format!("budget: {msg}")),
                Err(e) => {
                    let mut r = TheoremReport::new(id, name, q, "");
                    r.check(false, || e.to_string());
                    r
                }
            }
        })
        .collect()
}

/// Every applicable check on every corpus graph for every `q`. Cells run in
/// parallel; reports are ordered by graph, then `q`, then theorem.
pub fn run_suite(manifest: &Manifest, qs: &[usize], ids: &[TheoremId], options: &VerifyOptions) -> Result<SuiteReport> {
    let mut graphs = Vec::new();
    let mut manifest_errors = Vec::new();
    for e in &manifest.entries {
        let g = read_graph(&e.path)?;
        if e.tree.is_some_and(|t| t != g.is_loose_tree()) {
            manifest_errors.push(format!("{}: tree flag does not match", e.name));
        }
        if e.inner.is_some_and(|n| n != g.inner_vertices().len()) {
            manifest_errors.push(format!("{}: inner count does not match", e.name));
        }
        graphs.push((e, g));
    }
    for &q in qs {
        FField::new(q)?;
    }
    let cells: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|i| qs.iter().map(move |&q| (i, q)))
        .collect();
    let reports: Vec<Vec<TheoremReport>> = cells
        .par_iter()
        .map(|&(i, q)| {
            let (e, g) = &graphs[i];
            let opts = VerifyOptions {
                expected_igp: e.igp,
                ..options.clone()
            };
            let ctx = Context::new(&e.name, g.clone(), q, opts).expect("field checked");
            run_cell(&ctx, ids)
        })
        .collect();
    let reports: Vec<TheoremReport> = reports.into_iter().flatten().collect();
    let pass = manifest_errors.is_empty() && reports.iter().all(|r| r.verdict != Verdict::Fail);
    Ok(SuiteReport {
        reports,
        manifest_errors,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn run(id: TheoremId, g: &LooseGraph, q: usize) -> TheoremReport {
        verify(id, g, "t", q, &VerifyOptions::default()).unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn toy_checks() {
        let r = run(TheoremId::Ddc, &toy(), 2);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert_eq!(r.quantity("|D| first"), Some("2"));
        assert_eq!(r.quantity("|C|"), Some("1"));
        assert_eq!(r.quantity("|G|"), Some("8"));
        for id in [TheoremId::ToyEqual, TheoremId::Thmcp, TheoremId::KernelTrivial, TheoremId::Transroot] {
            assert_eq!(run(id, &toy(), 2).verdict, Verdict::Pass, "{id}");
        }
    }

    #[test]
    fn preconditions() {
        let e = verify(TheoremId::Ddc, &path(3), "p3", 2, &VerifyOptions::default());
        assert!(matches!(e, Err(Error::Input(_))));
        assert!(inapplicable(TheoremId::Mttrees, &path(3)).is_some());
        assert!(inapplicable(TheoremId::Mttrees, &path(4)).is_none());
    }

    #[test]
    fn path_checks() {
        let r = run(TheoremId::Mttrees, &path(4), 2);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert_eq!(r.quantity("|T(I) action|"), Some("2"));
        assert_eq!(r.quantity("|semilinear quotient|"), Some("1"));
        assert_eq!(run(TheoremId::LemfieldQuotient, &path(4), 2).verdict, Verdict::Pass);
        assert_eq!(run(TheoremId::LemfieldQuotient, &path(4), 4).verdict, Verdict::Reported);
        assert_eq!(run(TheoremId::SpanLemma, &path(4), 2).verdict, Verdict::Pass);
    }

    #[test]
    fn functoriality_on_small_sources() {
        let r = run(TheoremId::Functoriality, &small_graphs()[6], 2);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!(r.quantity("exhaustive pairs").unwrap().parse::<usize>().unwrap() > 100);
    }

    #[test]
    fn igp_expectation() {
        let opts = VerifyOptions {
            expected_igp: Some(false),
            ..VerifyOptions::default()
        };
        let r = verify(TheoremId::Igp, &square_with_diagonal(), "g2", 2, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.quantity("holds"), Some("false"));
    }

    #[test]
    fn manifest_parsing() {
        let m = Manifest::parse("# corpus\ntoy.lg tree=yes inner=2\n\nsq.lg igp=true # square\n", Path::new("/c")).unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[0].inner, Some(2));
        assert_eq!(m.entries[1].igp, Some(true));
        assert_eq!(m.entries[1].path, Path::new("/c/sq.lg"));
        assert!(Manifest::parse("x.lg color=red", Path::new(".")).is_err());
        let empty = run_suite(&Manifest::default(), &[2], &TheoremId::ALL, &VerifyOptions::default()).unwrap();
        assert!(empty.pass && empty.reports.is_empty());
    }
}
