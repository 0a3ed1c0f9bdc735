//! The general alternating-sum evaluator for `K(m, n)`, any order `m`.
//!
//! The sum runs over pairs of maps `R, C` assigning a nonnegative integer
//! to every covering tuple of degree `m` (equivalently, via the covering
//! table, to every permutation of `[m]`). `R` ranges over all maps with
//! total `n`; `C` ranges over the maps matching `R` on every *class*: for
//! each distinct component content `Z`, the sum of `C` over the tuples
//! containing `Z` must equal `q(Z)`, the matching sum of `R`. Writing `W`
//! for the variables whose tuple has an odd number of components, each
//! pair contributes
//!
//! `(-1)^{nm + sum W} * n! * prod_Z q(Z)! / (prod R! prod C!)`
//!
//! and the total is `K(m, n)`. Four evaluation routes are provided and
//! cross-checked:
//!
//! * [`GeneralForm::Eq56`] — direct enumeration of all `(R, C)` pairs by
//!   constraint propagation over the tuple classes;
//! * [`GeneralForm::Eq57`] — only the independent `C` variables are
//!   enumerated, over plain boxes `0..=mu`; the dependent carriers are
//!   reconstructed from the class identities and points with a negative
//!   reconstruction are skipped;
//! * [`GeneralForm::Eq65`] — the aggregated form: single-component tuples
//!   collapse into a total `f_0` with multiplicity `((m-1)!)^{f_0}`, the
//!   singleton-plus-rest tuples into a total `f` with multiplicity
//!   `((m-2)!)^f` and a binomial carrying the convolution;
//! * [`GeneralForm::Eq81`] — the same sum indexed by permutations, with
//!   classes given by distinct cycles (the `n!` level factor carries over
//!   unchanged).
//!
//! Every route accumulates exactly and checks the integrality of every
//! division. The outer composition space can be partitioned by rank (see
//! [`k_general_partial`]); partial sums are exact integers, so any
//! parallel arrangement reproduces the sequential result bit for bit.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::ops::Range;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::compositions::{
    composition_at_rank, count_compositions, next_composition, Compositions,
};
use crate::numeric::{
    exact_div, factorial, factorial_u128, neg_bang, negate_if_odd, BigCount,
};
use crate::perm::{all_permutations, Permutation};
use crate::tuples::{all_index_tuples, IndexTuple, Structure};
use crate::{Error, Result};

/// Which displayed arrangement of the general sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralForm {
    /// Full `(R, C)` enumeration over tuple classes.
    Eq56,
    /// Independent `C` variables only; dependent ones reconstructed.
    Eq57,
    /// Aggregated simplified form.
    Eq65,
    /// Full enumeration indexed by permutations and cycles.
    Eq81,
}

impl GeneralForm {
    pub const ALL: [GeneralForm; 4] = [
        GeneralForm::Eq56,
        GeneralForm::Eq57,
        GeneralForm::Eq65,
        GeneralForm::Eq81,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneralForm::Eq56 => "eq56",
            GeneralForm::Eq57 => "eq57",
            GeneralForm::Eq65 => "eq65",
            GeneralForm::Eq81 => "eq81",
        }
    }
}

/// How a single term derives its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermForm {
    /// `(-1)^{nm + sum W}` with plain factorials.
    Eq56,
    /// `(-1)^{n(m-1)}` with the signed factorials `(-q)!'` supplying the
    /// rest of the sign.
    Eq56NegBang,
}

/// Work limits for the general evaluator.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Largest degree admitted without an explicit override.
    pub max_degree: usize,
    /// Refusal threshold on the estimated number of `(R, C)` pairs.
    pub max_pairs: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_degree: 4,
            max_pairs: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct SolveStep {
    var: usize,
    forced_by: Option<usize>,
}

/// A var/class incidence system: variables `0..var_count`, classes as
/// member lists. Shared by the tuple, cycle, and reduced systems.
#[derive(Debug, Clone)]
struct ClassSystem {
    var_count: usize,
    class_members: Vec<Vec<usize>>,
    class_size: Vec<usize>,
    var_classes: Vec<Vec<usize>>,
    /// Component (or cycle) count of each variable's index.
    var_zeta: Vec<usize>,
    solve_order: Vec<SolveStep>,
    free_vars: Vec<usize>,
}

impl ClassSystem {
    fn build(var_count: usize, class_members: Vec<Vec<usize>>, var_zeta: Vec<usize>) -> Self {
        let class_size: Vec<usize> = class_members.iter().map(Vec::len).collect();
        let mut var_classes: Vec<Vec<usize>> = vec![Vec::new(); var_count];
        for (cl, members) in class_members.iter().enumerate() {
            for &v in members {
                var_classes[v].push(cl);
            }
        }
        // Static elimination order: whenever some class has exactly one
        // unassigned member, that member is forced next; otherwise the
        // lowest-indexed unassigned variable opens a branch.
        let mut assigned = vec![false; var_count];
        let mut remaining = class_size.clone();
        let mut solve_order = Vec::with_capacity(var_count);
        let mut free_vars = Vec::new();
        while solve_order.len() < var_count {
            let forced = class_members.iter().enumerate().find_map(|(cl, members)| {
                if remaining[cl] == 1 {
                    members
                        .iter()
                        .find(|&&v| !assigned[v])
                        .map(|&v| (v, Some(cl)))
                } else {
                    None
                }
            });
            let (var, forced_by) = forced.unwrap_or_else(|| {
                let v = (0..var_count).find(|&v| !assigned[v]).unwrap();
                free_vars.push(v);
                (v, None)
            });
            assigned[var] = true;
            for &cl in &var_classes[var] {
                remaining[cl] -= 1;
            }
            solve_order.push(SolveStep { var, forced_by });
        }
        ClassSystem {
            var_count,
            class_members,
            class_size,
            var_classes,
            var_zeta,
            solve_order,
            free_vars,
        }
    }

    /// Class totals `q(Z)` of a value vector.
    fn class_sums(&self, values: &[u64]) -> Vec<u64> {
        self.class_members
            .iter()
            .map(|members| members.iter().map(|&v| values[v]).sum())
            .collect()
    }

    /// `sum W`: total of the values at odd-zeta variables.
    fn odd_zeta_sum(&self, values: &[u64]) -> u64 {
        values
            .iter()
            .zip(&self.var_zeta)
            .filter(|(_, &z)| z % 2 == 1)
            .map(|(&v, _)| v)
            .sum()
    }

    /// Visits every nonnegative solution of `sum over class = rhs`.
    fn for_each_solution(&self, rhs: &[u64], mut leaf: impl FnMut(&[u64])) {
        let mut residual = rhs.to_vec();
        let mut remaining = self.class_size.clone();
        let mut values = vec![0u64; self.var_count];
        self.solve_rec(0, &mut residual, &mut remaining, &mut values, &mut leaf);
    }

    fn assign(&self, var: usize, v: u64, residual: &mut [u64], remaining: &mut [usize]) -> bool {
        for (idx, &cl) in self.var_classes[var].iter().enumerate() {
            // A class closing now must close exactly; any class must keep
            // a nonnegative residual.
            if residual[cl] < v || (remaining[cl] == 1 && residual[cl] != v) {
                for &done in &self.var_classes[var][..idx] {
                    residual[done] += v;
                    remaining[done] += 1;
                }
                return false;
            }
            residual[cl] -= v;
            remaining[cl] -= 1;
        }
        true
    }

    fn unassign(&self, var: usize, v: u64, residual: &mut [u64], remaining: &mut [usize]) {
        for &cl in &self.var_classes[var] {
            residual[cl] += v;
            remaining[cl] += 1;
        }
    }

    fn solve_rec(
        &self,
        step: usize,
        residual: &mut [u64],
        remaining: &mut [usize],
        values: &mut [u64],
        leaf: &mut impl FnMut(&[u64]),
    ) {
        if step == self.solve_order.len() {
            debug_assert!(residual.iter().all(|&r| r == 0));
            leaf(values);
            return;
        }
        let SolveStep { var, forced_by } = self.solve_order[step];
        let (lo, hi) = match forced_by {
            Some(cl) => (residual[cl], residual[cl]),
            None => (
                0,
                self.var_classes[var]
                    .iter()
                    .map(|&cl| residual[cl])
                    .min()
                    .unwrap_or(0),
            ),
        };
        for v in lo..=hi {
            if self.assign(var, v, residual, remaining) {
                values[var] = v;
                self.solve_rec(step + 1, residual, remaining, values, leaf);
                values[var] = 0;
                self.unassign(var, v, residual, remaining);
            }
        }
    }
}

/// Aggregation data for the simplified route.
#[derive(Debug, Clone)]
struct ReducedSystem {
    /// Variables with a single component; they collapse into `f_0`.
    f0_vars: Vec<usize>,
    /// Distinct singleton-plus-rest variable sets; they collapse into `f`.
    /// At degree 2 the two singleton positions name the same set, which
    /// must appear here once.
    fs_classes: Vec<Vec<usize>>,
    /// Surviving variables, ascending.
    rbar: Vec<usize>,
    /// Constraint system restricted to the survivors: middle classes plus
    /// the (restricted) singleton classes.
    sub: ClassSystem,
    sub_middle: Vec<usize>,
    sub_singleton: Vec<usize>,
}

/// Precomputed incidence data for one degree `m`.
pub struct GeneralContext {
    m: usize,
    tuples: Vec<IndexTuple>,
    perms: Vec<Permutation>,
    tuple_sys: ClassSystem,
    cycle_sys: ClassSystem,
    reduced: ReducedSystem,
    /// Component size per tuple-system class.
    component_sizes: Vec<usize>,
    /// Per non-singleton class: the variable carrying exactly that
    /// component and zeros elsewhere.
    d_var_of_class: Vec<Option<usize>>,
    /// Index of the all-zeros tuple, the carrier of every singleton class.
    zero_var: usize,
    /// Class id of the singleton component at each position `1..=m`.
    singleton_class_of_pos: Vec<usize>,
    /// Independent column variables (not a carrier, not the zero tuple).
    c_free: Vec<usize>,
    class_labels: Vec<String>,
}

impl GeneralContext {
    pub fn new(m: usize) -> Result<Self> {
        let tuples = all_index_tuples(m)?;
        let var_count = tuples.len();

        // Tuple system: classes keyed by full component content.
        let mut class_index: BTreeMap<Vec<(usize, u8)>, usize> = BTreeMap::new();
        let mut class_members: Vec<Vec<usize>> = Vec::new();
        let mut component_sizes: Vec<usize> = Vec::new();
        let mut class_labels: Vec<String> = Vec::new();
        let mut var_zeta = Vec::with_capacity(var_count);
        let mut var_structures: Vec<Structure> = Vec::with_capacity(var_count);
        for (vi, t) in tuples.iter().enumerate() {
            let s = t.structure();
            var_zeta.push(s.zeta());
            for comp in s.components() {
                let key: Vec<(usize, u8)> = comp.members().to_vec();
                let cl = *class_index.entry(key.clone()).or_insert_with(|| {
                    class_members.push(Vec::new());
                    component_sizes.push(comp.size());
                    class_labels.push(component_label(&key));
                    class_members.len() - 1
                });
                class_members[cl].push(vi);
            }
            var_structures.push(s);
        }
        let tuple_sys = ClassSystem::build(var_count, class_members, var_zeta);

        // Carriers: the tuple holding one class's content and zeros
        // elsewhere. Singleton classes all share the all-zeros carrier.
        let zero_var = tuples
            .iter()
            .position(|t| *t == IndexTuple::zeros(m))
            .expect("all-zeros tuple is enumerated");
        let mut d_var_of_class = vec![None; tuple_sys.class_members.len()];
        let mut singleton_class_of_pos = vec![usize::MAX; m + 1];
        for (key, &cl) in &class_index {
            if key.len() == 1 {
                singleton_class_of_pos[key[0].0] = cl;
                continue;
            }
            let mut desc = vec![0u8; m];
            for &(pos, val) in key {
                desc[m - pos] = val;
            }
            let carrier = IndexTuple::from_desc(&desc).expect("component content is in the box");
            let var = tuples
                .iter()
                .position(|t| *t == carrier)
                .expect("carrier tuple is enumerated");
            d_var_of_class[cl] = Some(var);
        }
        let mut is_carrier = vec![false; var_count];
        is_carrier[zero_var] = true;
        for d in d_var_of_class.iter().flatten() {
            is_carrier[*d] = true;
        }
        let c_free: Vec<usize> = (0..var_count).filter(|&v| !is_carrier[v]).collect();

        // Cycle system: variables are permutations, classes are distinct
        // cycles in standard form.
        let perms: Vec<Permutation> = all_permutations(m)?.collect();
        let mut cycle_index: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
        let mut cycle_members: Vec<Vec<usize>> = Vec::new();
        let mut cycle_zeta = Vec::with_capacity(perms.len());
        for (vi, p) in perms.iter().enumerate() {
            let cf = p.standard_cycles();
            cycle_zeta.push(cf.cycle_count());
            for cycle in cf.cycles() {
                let cl = *cycle_index.entry(cycle.clone()).or_insert_with(|| {
                    cycle_members.push(Vec::new());
                    cycle_members.len() - 1
                });
                cycle_members[cl].push(vi);
            }
        }
        let cycle_sys = ClassSystem::build(perms.len(), cycle_members, cycle_zeta);

        let reduced = build_reduced(m, &tuple_sys, &var_structures, &component_sizes);

        Ok(GeneralContext {
            m,
            tuples,
            perms,
            tuple_sys,
            cycle_sys,
            reduced,
            component_sizes,
            d_var_of_class,
            zero_var,
            singleton_class_of_pos,
            c_free,
            class_labels,
        })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// The covering tuples, in the lexicographic order every value vector
    /// is aligned to.
    pub fn tuples(&self) -> &[IndexTuple] {
        &self.tuples
    }

    /// The permutations indexing the cycle-language route, in word order.
    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    /// Number of distinct classes (component contents).
    pub fn class_count(&self) -> usize {
        self.component_sizes.len()
    }

    /// Number of distinct classes of a given component size.
    pub fn class_count_of_size(&self, size: usize) -> usize {
        self.component_sizes.iter().filter(|&&s| s == size).count()
    }

    /// The independent column variables of the reconstruction route.
    pub fn independent_c_count(&self) -> usize {
        self.c_free.len()
    }

    /// Block sizes of the aggregated route: `|F_0|`, the distinct `F_s`
    /// sizes, `|Rbar|`, and its independent column count.
    pub fn reduction_profile(&self) -> (usize, Vec<usize>, usize, usize) {
        (
            self.reduced.f0_vars.len(),
            self.reduced.fs_classes.iter().map(Vec::len).collect(),
            self.reduced.rbar.len(),
            self.reduced.sub.free_vars.len(),
        )
    }

    /// Human-readable class label (`pos:val` pairs), for diagnostics.
    pub fn class_label(&self, class: usize) -> &str {
        &self.class_labels[class]
    }

    /// Stream of all `R` maps with total `n`, as vectors aligned to
    /// [`Self::tuples`], ascending lexicographically.
    pub fn enumerate_r(
        &self,
        n: u64,
        opts: &EvalOptions,
    ) -> Result<impl Iterator<Item = Vec<u64>>> {
        if self.m > opts.max_degree {
            return Err(Error::DegreeOutOfRange {
                degree: self.m,
                min: 1,
                max: opts.max_degree,
            });
        }
        let k = self.tuples.len();
        let count = count_compositions(n, k);
        if count > BigCount::from(opts.max_pairs) {
            return Err(Error::BudgetExceeded {
                estimate: count.to_u128().unwrap_or(u128::MAX),
                budget: opts.max_pairs,
                what: "R maps, the composition count C(n + m! - 1, m! - 1)",
            });
        }
        Ok(Compositions::new(n, k))
    }

    /// All `C` maps compatible with `r`, in elimination-order DFS order.
    ///
    /// The stream is never empty: `C = R` always satisfies the classes.
    pub fn enumerate_c(&self, r: &[u64]) -> Vec<Vec<u64>> {
        assert_eq!(r.len(), self.tuples.len());
        let rhs = self.tuple_sys.class_sums(r);
        let mut out = Vec::new();
        self.tuple_sys
            .for_each_solution(&rhs, |c| out.push(c.to_vec()));
        out
    }

    /// Whether `(r, c)` satisfies every class identity; test support.
    pub fn constraints_hold(&self, r: &[u64], c: &[u64]) -> bool {
        self.tuple_sys.class_sums(r) == self.tuple_sys.class_sums(c)
    }

    /// One term of the sum, as an exact rational.
    pub fn term_value(&self, r: &[u64], c: &[u64], form: TermForm) -> BigRational {
        let n: u64 = r.iter().sum();
        let q = self.tuple_sys.class_sums(r);
        let mut den = BigCount::one();
        for &v in r.iter().chain(c) {
            den *= factorial(v);
        }
        match form {
            TermForm::Eq56 => {
                let mut num = factorial(n); // the level-zero factor q(Z_0)!
                for &qz in &q {
                    num *= factorial(qz);
                }
                let exponent = n * self.m as u64 + self.tuple_sys.odd_zeta_sum(r);
                BigRational::new(negate_if_odd(num, exponent), den)
            }
            TermForm::Eq56NegBang => {
                let mut num = neg_bang(n);
                for &qz in &q {
                    num *= neg_bang(qz);
                }
                let exponent = n * (self.m as u64 - 1);
                BigRational::new(negate_if_odd(num, exponent), den)
            }
        }
    }
}

fn component_label(key: &[(usize, u8)]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, (pos, val)) in key.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{pos}:{val}");
    }
    s
}

fn build_reduced(
    m: usize,
    tuple_sys: &ClassSystem,
    var_structures: &[Structure],
    component_sizes: &[usize],
) -> ReducedSystem {
    let var_count = tuple_sys.var_count;
    let mut f0_vars = Vec::new();
    let mut fs_by_pos: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    let mut in_f = vec![false; var_count];
    for (v, s) in var_structures.iter().enumerate() {
        if s.zeta() == 1 {
            f0_vars.push(v);
            in_f[v] = true;
        } else if s.zeta() == 2 {
            for comp in s.components() {
                if comp.size() == 1 {
                    fs_by_pos[comp.anchor()].push(v);
                    in_f[v] = true;
                }
            }
        }
    }
    let mut fs_classes: Vec<Vec<usize>> = Vec::new();
    for s in 1..=m {
        if !fs_by_pos[s].is_empty() && !fs_classes.contains(&fs_by_pos[s]) {
            fs_classes.push(fs_by_pos[s].clone());
        }
    }
    let rbar: Vec<usize> = (0..var_count).filter(|&v| !in_f[v]).collect();
    let rbar_pos: BTreeMap<usize, usize> =
        rbar.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut sub_members: Vec<Vec<usize>> = Vec::new();
    let mut sub_middle = Vec::new();
    let mut sub_singleton = Vec::new();
    for (cl, members) in tuple_sys.class_members.iter().enumerate() {
        let size = component_sizes[cl];
        let restricted: Vec<usize> = members
            .iter()
            .filter_map(|v| rbar_pos.get(v).copied())
            .collect();
        if size == 1 {
            if !restricted.is_empty() {
                sub_singleton.push(sub_members.len());
                sub_members.push(restricted);
            }
        } else if (2..=m.saturating_sub(2)).contains(&size) {
            // Middle classes never touch the aggregated variables.
            debug_assert_eq!(restricted.len(), members.len());
            sub_middle.push(sub_members.len());
            sub_members.push(restricted);
        }
    }
    let sub_zeta: Vec<usize> = rbar.iter().map(|&v| var_structures[v].zeta()).collect();
    let sub = ClassSystem::build(rbar.len(), sub_members, sub_zeta);
    ReducedSystem {
        f0_vars,
        fs_classes,
        rbar,
        sub,
        sub_middle,
        sub_singleton,
    }
}

/// Evaluation plan: outer-space size and the refusal estimate.
#[derive(Debug, Clone, Copy)]
pub struct EvalPlan {
    /// Number of outer compositions (the partitionable dimension).
    pub outer_size: u64,
    /// Upper estimate of `(R, C)` pairs visited.
    pub estimated_pairs: u128,
}

/// Computes the work plan, enforcing the degree cap and the pair budget.
pub fn plan(m: usize, n: u64, form: GeneralForm, opts: &EvalOptions) -> Result<EvalPlan> {
    if m == 0 {
        return Err(Error::BadDimensions { m, n: n as usize });
    }
    if m == 1 {
        return Ok(EvalPlan {
            outer_size: 1,
            estimated_pairs: 1,
        });
    }
    if m > opts.max_degree {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            min: 1,
            max: opts.max_degree,
        });
    }
    let ctx = GeneralContext::new(m)?;
    let box_bound = |free: usize| (n as u128 + 1).saturating_pow(free as u32);
    let (outer, pairs) = match form {
        GeneralForm::Eq56 | GeneralForm::Eq57 | GeneralForm::Eq81 => {
            let outer = count_compositions(n, ctx.tuples.len());
            let pairs = outer
                .to_u128()
                .unwrap_or(u128::MAX)
                .saturating_mul(box_bound(ctx.c_free.len()));
            (outer, pairs)
        }
        GeneralForm::Eq65 => {
            let outer = count_compositions(n, 2 + ctx.reduced.rbar.len());
            let pairs = outer
                .to_u128()
                .unwrap_or(u128::MAX)
                .saturating_mul(box_bound(ctx.reduced.sub.free_vars.len()));
            (outer, pairs)
        }
    };
    if pairs > opts.max_pairs as u128 {
        return Err(Error::BudgetExceeded {
            estimate: pairs,
            budget: opts.max_pairs,
            what: "(R, C) pairs",
        });
    }
    Ok(EvalPlan {
        outer_size: outer.to_u64().expect("bounded by the pair budget"),
        estimated_pairs: pairs,
    })
}

/// `K(m, n)` by the selected route. `K(1, n) = 1` by convention (the one
/// fixed row); the sum machinery starts at degree 2.
pub fn k_general(m: usize, n: u64, form: GeneralForm, opts: &EvalOptions) -> Result<BigCount> {
    let plan = plan(m, n, form, opts)?;
    k_general_partial(m, n, form, 0..plan.outer_size, opts)
}

/// As the full-enumeration route of [`k_general`], but deriving every
/// sign through the signed factorials; must agree bit for bit.
pub fn k_general_negbang(m: usize, n: u64, opts: &EvalOptions) -> Result<BigCount> {
    let plan = plan(m, n, GeneralForm::Eq56, opts)?;
    if m == 1 {
        return Ok(BigCount::one());
    }
    let ctx = GeneralContext::new(m)?;
    eval_full(
        &ctx,
        Indexing::Tuple,
        n,
        0..plan.outer_size,
        TermForm::Eq56NegBang,
    )
}

/// Partial sum over the outer compositions with ranks in `range`.
///
/// Budget is the caller's concern (see [`plan`]); the degree cap is still
/// enforced here. Disjoint ranges covering `0..outer_size` sum to
/// `k_general(m, n, form)` exactly.
pub fn k_general_partial(
    m: usize,
    n: u64,
    form: GeneralForm,
    range: Range<u64>,
    opts: &EvalOptions,
) -> Result<BigCount> {
    if m == 0 {
        return Err(Error::BadDimensions { m, n: n as usize });
    }
    if m == 1 {
        return Ok(if range.contains(&0) {
            BigCount::one()
        } else {
            BigCount::zero()
        });
    }
    if m > opts.max_degree {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            min: 1,
            max: opts.max_degree,
        });
    }
    let ctx = GeneralContext::new(m)?;
    match form {
        GeneralForm::Eq56 => eval_full(&ctx, Indexing::Tuple, n, range, TermForm::Eq56),
        GeneralForm::Eq81 => eval_full(&ctx, Indexing::Cycle, n, range, TermForm::Eq56),
        GeneralForm::Eq57 => eval_eq57(&ctx, n, range),
        GeneralForm::Eq65 => eval_eq65(&ctx, n, range),
    }
}

/// Latin squares: `L(n) = n! K(n, n)` through the general sum.
pub fn latin_squares(n: u64, opts: &EvalOptions) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::BadDimensions { m: 0, n: 0 });
    }
    Ok(factorial(n) * k_general(n as usize, n, GeneralForm::Eq56, opts)?)
}

#[derive(Clone, Copy)]
enum Indexing {
    Tuple,
    Cycle,
}

/// Shared full-enumeration evaluator for the tuple- and cycle-indexed
/// routes. Per `R`, the class totals fix sign and numerator; the column
/// enumeration contributes `sum_C n!/prod C!`, an exact integer because
/// the columns split into the classes through position 1 (respectively
/// the cycles through the largest element).
fn eval_full(
    ctx: &GeneralContext,
    indexing: Indexing,
    n: u64,
    range: Range<u64>,
    term_form: TermForm,
) -> Result<BigCount> {
    let sys = match indexing {
        Indexing::Tuple => &ctx.tuple_sys,
        Indexing::Cycle => &ctx.cycle_sys,
    };
    let m = ctx.m as u64;
    if range.is_empty() {
        return Ok(BigCount::zero());
    }
    let n_fact = factorial_u128(n);
    let mut r = composition_at_rank(n, sys.var_count, range.start);
    let mut acc = BigCount::zero();
    for rank in range.clone() {
        let q = sys.class_sums(&r);
        let mut c_sum = BigCount::zero();
        sys.for_each_solution(&q, |c| {
            let mut prod: u128 = 1;
            for &v in c {
                prod *= factorial_u128(v);
            }
            debug_assert_eq!(n_fact % prod, 0);
            c_sum += n_fact / prod;
        });
        let mut r_fact = BigCount::one();
        for &v in &r {
            r_fact *= factorial(v);
        }
        let contribution = match term_form {
            TermForm::Eq56 => {
                let mut base = BigCount::one();
                for &qz in &q {
                    base *= factorial(qz);
                }
                let exponent = n * m + sys.odd_zeta_sum(&r);
                negate_if_odd(exact_div(base * c_sum, &r_fact)?, exponent)
            }
            TermForm::Eq56NegBang => {
                let mut base = neg_bang(n);
                for &qz in &q {
                    base *= neg_bang(qz);
                }
                let den = r_fact * factorial(n);
                negate_if_odd(exact_div(base * c_sum, &den)?, n * (m - 1))
            }
        };
        acc += contribution;
        if rank + 1 < range.end {
            let more = next_composition(&mut r);
            debug_assert!(more);
        }
    }
    Ok(acc)
}

/// Independent-variable route.
fn eval_eq57(ctx: &GeneralContext, n: u64, range: Range<u64>) -> Result<BigCount> {
    let sys = &ctx.tuple_sys;
    if range.is_empty() {
        return Ok(BigCount::zero());
    }
    let mut r = composition_at_rank(n, sys.var_count, range.start);
    let mut acc = BigCount::zero();
    let mut c = vec![0u64; sys.var_count];
    for rank in range.clone() {
        let q = sys.class_sums(&r);
        // Sign and the R-dependent part of the term.
        let mut num = factorial(n);
        for &qz in &q {
            num *= factorial(qz);
        }
        let mut r_fact = BigCount::one();
        for &v in &r {
            r_fact *= factorial(v);
        }
        let exponent = n * ctx.m as u64 + sys.odd_zeta_sum(&r);
        let base = negate_if_odd(exact_div(num, &r_fact)?, exponent);
        eq57_free_rec(ctx, &q, 0, &mut c, &base, &mut acc)?;
        if rank + 1 < range.end {
            next_composition(&mut r);
        }
    }
    Ok(acc)
}

/// Iterates free columns over their boxes `0..=mu`, `mu` the least class
/// total among the variable's classes, then reconstructs the carriers.
fn eq57_free_rec(
    ctx: &GeneralContext,
    q: &[u64],
    idx: usize,
    c: &mut [u64],
    base: &BigCount,
    acc: &mut BigCount,
) -> Result<()> {
    if idx == ctx.c_free.len() {
        if eq57_reconstruct(ctx, q, c) {
            let mut c_fact = BigCount::one();
            for &v in c.iter() {
                c_fact *= factorial(v);
            }
            *acc += exact_div(base.clone(), &c_fact)?;
        }
        return Ok(());
    }
    let var = ctx.c_free[idx];
    let mu = ctx.tuple_sys.var_classes[var]
        .iter()
        .map(|&cl| q[cl])
        .min()
        .unwrap_or(0);
    for v in 0..=mu {
        c[var] = v;
        eq57_free_rec(ctx, q, idx + 1, c, base, acc)?;
    }
    c[var] = 0;
    Ok(())
}

/// Reconstructs the dependent carriers from the class identities; false
/// when any would be negative (the point is outside the domain). Each
/// non-singleton class contains exactly its own carrier plus free
/// variables; the all-zeros tuple follows from the singleton class at
/// position 1, the remaining singleton identities being linearly
/// dependent (asserted in debug builds).
fn eq57_reconstruct(ctx: &GeneralContext, q: &[u64], c: &mut [u64]) -> bool {
    for (cl, d_var) in ctx.d_var_of_class.iter().enumerate() {
        let Some(d_var) = *d_var else { continue };
        let free_sum: u64 = ctx.tuple_sys.class_members[cl]
            .iter()
            .filter(|&&v| v != d_var)
            .map(|&v| c[v])
            .sum();
        match q[cl].checked_sub(free_sum) {
            Some(v) => c[d_var] = v,
            None => return false,
        }
    }
    let cl1 = ctx.singleton_class_of_pos[1];
    let others: u64 = ctx.tuple_sys.class_members[cl1]
        .iter()
        .filter(|&&v| v != ctx.zero_var)
        .map(|&v| c[v])
        .sum();
    match q[cl1].checked_sub(others) {
        Some(v) => c[ctx.zero_var] = v,
        None => return false,
    }
    #[cfg(debug_assertions)]
    for pos in 2..=ctx.m {
        let cl = ctx.singleton_class_of_pos[pos];
        let total: u64 = ctx.tuple_sys.class_members[cl].iter().map(|&v| c[v]).sum();
        debug_assert_eq!(total, q[cl], "dependent singleton identity");
    }
    true
}

/// Aggregated route.
fn eval_eq65(ctx: &GeneralContext, n: u64, range: Range<u64>) -> Result<BigCount> {
    let red = &ctx.reduced;
    let m = ctx.m as u64;
    if range.is_empty() {
        return Ok(BigCount::zero());
    }
    let parts = 2 + red.rbar.len();
    let kcls = red.fs_classes.len() as u64;
    let f0_mult = factorial(m - 1);
    let f_mult = factorial(m.saturating_sub(2));
    let mut comp = composition_at_rank(n, parts, range.start);
    let mut acc = BigCount::zero();
    for rank in range.clone() {
        let f0 = comp[0];
        let f = comp[1];
        let rbar_vals = &comp[2..];
        let nb: u64 = rbar_vals.iter().sum();
        let rhs = red.sub.class_sums(rbar_vals);
        let qbar_sum: u64 = red.sub_singleton.iter().map(|&cl| rhs[cl]).sum();
        let mut num = f0_mult.pow(f0 as u32) * f_mult.pow(f as u32) * factorial(n);
        for &cl in &red.sub_middle {
            num *= factorial(rhs[cl]);
        }
        for &cl in &red.sub_singleton {
            num *= factorial(rhs[cl]);
        }
        num *= factorial(f + qbar_sum + kcls - 1);
        let mut den = factorial(f0) * factorial(f) * factorial(qbar_sum + kcls - 1);
        for &v in rbar_vals {
            den *= factorial(v);
        }
        den *= factorial(nb);
        let exponent = n * m + f0 + red.sub.odd_zeta_sum(rbar_vals);
        // Column sum over the reduced system: sum of nb!/prod C!.
        let nb_fact = factorial_u128(nb);
        let mut c_sum = BigCount::zero();
        red.sub.for_each_solution(&rhs, |c| {
            let mut prod: u128 = 1;
            for &v in c {
                prod *= factorial_u128(v);
            }
            debug_assert_eq!(nb_fact % prod, 0);
            c_sum += nb_fact / prod;
        });
        acc += negate_if_odd(exact_div(num * c_sum, &den)?, exponent);
        if rank + 1 < range.end {
            next_composition(&mut comp);
        }
    }
    Ok(acc)
}
