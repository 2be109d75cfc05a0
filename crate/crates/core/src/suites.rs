//! Seeded exact-residual suites.
//!
//! Every suite walks `N = 0..=max_n` for a handful of random rational
//! parameter sets and stops at the first nonzero residual. The same seed
//! always draws the same parameters in the same order.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Matrix, Rational, TriangleGrid};
use crate::griffiths::{
    biorth_norm, g_biorth_gram, g_tilde_table, EvalMethod, GRelationId, GriffithsTable, ParamSet,
};
use crate::krawtchouk::{
    k_gram, k_norm, relation_residual_with, KrawtchoukFamily, KrawtchoukParams, RelationId,
};
use crate::operators::{
    build_operator, commutator_is_zero, eigen_residual, FamilyParams, OperatorKind,
};
use crate::tratnik::{TRelationId, TratnikParams, TratnikTable};

/// Bound on numerators and denominators of sampled parameters.
pub const SAMPLE_BOUND: i64 = 97;

/// Deterministic source of rational parameters.
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        ParamSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `a/b` with `|a|, b <= 97`, never 0 or 1.
    pub fn rational(&mut self) -> Rational {
        loop {
            let num = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
            let den = self.rng.gen_range(1..=SAMPLE_BOUND);
            let q = Rational::new(num.into(), den.into());
            if !q.is_zero() && !q.is_one() {
                return q;
            }
        }
    }

    pub fn krawtchouk(&mut self, n: usize) -> KrawtchoukParams {
        KrawtchoukParams::new(self.rational(), n).expect("sampled p avoids 0 and 1")
    }

    pub fn tratnik(&mut self, n: usize) -> TratnikParams {
        TratnikParams::new(self.rational(), self.rational(), n).expect("sampled p avoids 0 and 1")
    }

    pub fn griffiths(&mut self, n: usize) -> ParamSet {
        ParamSet::new(
            self.rational(),
            self.rational(),
            self.rational(),
            self.rational(),
            n,
        )
        .expect("sampled parameters are valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    KrawtchoukRelations,
    Tratnik,
    Griffiths,
    Duality,
    Operators,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::KrawtchoukRelations,
        Suite::Tratnik,
        Suite::Griffiths,
        Suite::Duality,
        Suite::Operators,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::KrawtchoukRelations => "krawtchouk-relations",
            Suite::Tratnik => "tratnik",
            Suite::Griffiths => "griffiths",
            Suite::Duality => "duality",
            Suite::Operators => "operators",
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
            .ok_or_else(|| Error::out_of_domain("suite", s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub max_n: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub suite: Suite,
    pub check: String,
    pub indices: String,
    pub params: String,
    pub residual: Rational,
    /// command-line flags that rerun the failing suite
    pub reproducer: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} failed at {} with {}: residual {}",
            self.check,
            self.indices,
            self.params,
            format_rational(&self.residual)
        )?;
        write!(f, "reproduce: {}", self.reproducer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    /// residuals evaluated
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Run<'a> {
    suite: Suite,
    config: &'a SuiteConfig,
    checked: usize,
}

type Step = std::result::Result<(), Box<Counterexample>>;

impl Run<'_> {
    fn check(
        &mut self,
        check: impl fmt::Display,
        indices: impl FnOnce() -> String,
        params: &str,
        residual: Rational,
    ) -> Step {
        self.checked += 1;
        if residual.is_zero() {
            return Ok(());
        }
        Err(Box::new(Counterexample {
            suite: self.suite,
            check: check.to_string(),
            indices: indices(),
            params: params.to_string(),
            residual,
            reproducer: format!(
                "check --suite {} --N {} --seed {} --samples {}",
                self.suite, self.config.max_n, self.config.seed, self.config.samples
            ),
        }))
    }

    /// One check per entry of a residual table over both triangles.
    fn table(
        &mut self,
        check: impl fmt::Display,
        grid: &TriangleGrid,
        params: &str,
        residuals: &Matrix,
    ) -> Step {
        let d = grid.len();
        let Some((r, c, v)) = residuals.first_nonzero() else {
            self.checked += d * d;
            return Ok(());
        };
        self.checked += r * d + c;
        let ((i, j), (x, y)) = (grid.point(r), grid.point(c));
        self.check(
            check,
            || format!("(i, j, x, y) = ({i}, {j}, {x}, {y})"),
            params,
            v.clone(),
        )
    }

    fn flag(&mut self, check: &str, indices: String, params: &str, ok: bool) -> Step {
        let residual = if ok {
            Rational::zero()
        } else {
            Rational::one()
        };
        self.check(check, || indices, params, residual)
    }
}

/// Runs `suite`. `Err` only for configuration problems; a failing identity is
/// reported through [`SuiteOutcome::counterexample`].
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut run = Run {
        suite,
        config,
        checked: 0,
    };
    let mut sampler = ParamSampler::new(config.seed);
    let mut outcome = Ok(());
    for _ in 0..config.samples {
        outcome = match suite {
            Suite::KrawtchoukRelations => krawtchouk_sample(&mut run, &mut sampler)?,
            Suite::Tratnik => tratnik_sample(&mut run, &mut sampler)?,
            Suite::Griffiths => griffiths_sample(&mut run, &mut sampler)?,
            Suite::Duality => duality_sample(&mut run, &mut sampler)?,
            Suite::Operators => operators_sample(&mut run, &mut sampler)?,
        };
        if outcome.is_err() {
            break;
        }
    }
    Ok(SuiteOutcome {
        suite,
        checked: run.checked,
        counterexample: outcome.err().map(|c| *c),
    })
}

/// Orthogonality and the fourteen relations for one `p`, all `N <= max_n`.
fn krawtchouk_sample(run: &mut Run, sampler: &mut ParamSampler) -> Result<Step> {
    let p = sampler.rational();
    let family = KrawtchoukFamily::new(p.clone(), run.config.max_n + 1)?;
    for n in 0..=run.config.max_n {
        let params = KrawtchoukParams::new(p.clone(), n)?;
        let desc = format!("--p {} --N {n}", format_rational(&p));
        let gram = k_gram(&params);
        for i in 0..=n {
            for l in 0..=n {
                let want = if i == l {
                    k_norm(i, &params)?
                } else {
                    Rational::zero()
                };
                if let Err(c) = run.check(
                    "orthogonality",
                    || format!("(i, l) = ({i}, {l})"),
                    &desc,
                    &gram[(i, l)] - want,
                ) {
                    return Ok(Err(c));
                }
            }
        }
        for rel in RelationId::ALL {
            let Some((is, xs)) = rel.admissible(n) else {
                continue;
            };
            for i in is {
                for x in xs.clone() {
                    let r = relation_residual_with(rel, i, x, n, &family)?;
                    if let Err(c) = run.check(rel, || format!("(i, x) = ({i}, {x})"), &desc, r) {
                        return Ok(Err(c));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

fn tratnik_sample(run: &mut Run, sampler: &mut ParamSampler) -> Result<Step> {
    let base = sampler.tratnik(0);
    for n in 0..=run.config.max_n {
        let params = TratnikParams { n, ..base.clone() };
        let desc = params.describe();
        let table = TratnikTable::new(&params)?;
        let grid = table.grid().clone();
        for rel in TRelationId::ALL {
            if let Err(c) = run.table(rel, &grid, &desc, &table.relation_residuals(rel)?) {
                return Ok(Err(c));
            }
        }
    }
    Ok(Ok(()))
}

/// Relations, agreement of the three evaluation routes, and biorthogonality.
fn griffiths_sample(run: &mut Run, sampler: &mut ParamSampler) -> Result<Step> {
    let base = sampler.griffiths(0);
    for n in 0..=run.config.max_n {
        let params = ParamSet { n, ..base.clone() };
        let desc = params.describe();
        let table = GriffithsTable::new(&params)?;
        let grid = table.grid().clone();
        let at = |r: usize, c: usize| {
            let ((i, j), (x, y)) = (grid.point(r), grid.point(c));
            format!("(i, j, x, y) = ({i}, {j}, {x}, {y})")
        };
        for rel in GRelationId::ALL {
            if let Err(e) = run.table(rel, &grid, &desc, &table.relation_residuals(rel)?) {
                return Ok(Err(e));
            }
        }
        for method in [EvalMethod::ViaTratnikXY, EvalMethod::ViaTratnikYX] {
            let other = GriffithsTable::with_method(&params, method)?;
            for r in 0..grid.len() {
                for c in 0..grid.len() {
                    let res = &other.values()[(r, c)] - &table.values()[(r, c)];
                    if let Err(e) = run.check(format!("{method:?}"), || at(r, c), &desc, res) {
                        return Ok(Err(e));
                    }
                }
            }
        }
        let gram = g_biorth_gram(&params)?;
        for (r, (i, j)) in grid.iter().enumerate() {
            for c in 0..grid.len() {
                let want = if r == c {
                    biorth_norm(i, j, &params)?
                } else {
                    Rational::zero()
                };
                let (a, b) = (grid.point(r), grid.point(c));
                if let Err(e) = run.check(
                    "biorthogonality",
                    || format!("{a:?} x {b:?}"),
                    &desc,
                    &gram[(r, c)] - want,
                ) {
                    return Ok(Err(e));
                }
            }
        }
    }
    Ok(Ok(()))
}

fn duality_sample(run: &mut Run, sampler: &mut ParamSampler) -> Result<Step> {
    let base = sampler.griffiths(0);
    for n in 0..=run.config.max_n {
        let params = ParamSet { n, ..base.clone() };
        let desc = params.describe();
        let lhs = g_tilde_table(&params)?;
        let rhs = g_tilde_table(&params.dual())?;
        let grid = TriangleGrid::new(n);
        for (r, (i, j)) in grid.iter().enumerate() {
            for (c, (x, y)) in grid.iter().enumerate() {
                let res = &lhs[(r, c)] - &rhs[(c, r)];
                if let Err(e) = run.check(
                    "duality",
                    || format!("(i, j, x, y) = ({i}, {j}, {x}, {y})"),
                    &desc,
                    res,
                ) {
                    return Ok(Err(e));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Matched eigen-residuals for all eight operators and the two same-side
/// commutators.
fn operators_sample(run: &mut Run, sampler: &mut ParamSampler) -> Result<Step> {
    let gbase = sampler.griffiths(0);
    let tbase = TratnikParams::new(gbase.p1.clone(), gbase.p2.clone(), 0)?;
    for n in 0..=run.config.max_n {
        let gp = ParamSet { n, ..gbase.clone() };
        let tp = TratnikParams { n, ..tbase.clone() };
        let gdesc = gp.describe();
        let tdesc = tp.describe();
        let ttable = TratnikTable::new(&tp)?;
        let gtable = GriffithsTable::new(&gp)?;
        let tfam = FamilyParams::Tratnik(tp);
        let gfam = FamilyParams::Griffiths(gp.clone());
        for kind in OperatorKind::ALL {
            let (fam, table, desc) = match kind {
                OperatorKind::Tratnik(_) => (&tfam, ttable.values(), &tdesc),
                _ => (&gfam, gtable.values(), &gdesc),
            };
            let op = build_operator(kind, fam)?;
            let res = eigen_residual(&op, table, |p| kind.eigenvalue(p))?;
            if let Err(e) = run.check(kind, || format!("N = {n}"), desc, res) {
                return Ok(Err(e));
            }
            if let Err(e) = run.flag(
                "sparsity",
                format!("{kind} at N = {n}"),
                desc,
                op.max_row_nnz() <= 7 && op.within_stencil(),
            ) {
                return Ok(Err(e));
            }
        }
        // commutation is only claimed where the joint eigenbasis is complete
        let grid = TriangleGrid::new(n);
        let complete = grid
            .iter()
            .map(|(i, j)| biorth_norm(i, j, &gp))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|h| !h.is_zero());
        if let Err(e) = run.flag(
            "biorthogonality-diagonal-nonzero",
            format!("N = {n}"),
            &gdesc,
            complete,
        ) {
            return Ok(Err(e));
        }
        for (a, b) in [
            (GRelationId::RecX, GRelationId::RecY),
            (GRelationId::DiffI, GRelationId::DiffJ),
        ] {
            let oa = build_operator(OperatorKind::Griffiths(a), &gfam)?;
            let ob = build_operator(OperatorKind::Griffiths(b), &gfam)?;
            let ok = commutator_is_zero(&oa, &ob)?;
            if let Err(e) = run.flag("commutator", format!("[{a}, {b}] at N = {n}"), &gdesc, ok) {
                return Ok(Err(e));
            }
        }
    }
    Ok(Ok(()))
}
