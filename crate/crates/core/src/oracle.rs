//! Brute-force multiplicity counts over the index tuples of the structure
//! formula, and the forced-index elimination they are checked against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decompose::Setting;
use crate::error::{Error, Result};
use crate::grothendieck::{JacquetTerm, Multisegment};
use crate::halfint::HalfInt;
use crate::mu_star::{index_term, sp_upper_mu_star, FilterMode};
use crate::segment::{Segment, Support};
use crate::symbols::CuspidalSymbol;
use crate::triples::{sp_embedding, FamilyEntry, StronglyPositiveDescriptor};

pub const DEFAULT_TUPLE_CAP: u128 = 10_000_000;

/// Which classical parts count as a match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnchorCondition {
    /// The classical part has the cuspidal support of `σ_sp`.
    ExactSp,
    /// The classical part has the support of an extension of `σ_sp` by the
    /// listed query-family indices.
    ExtensionOf(BTreeSet<usize>),
}

#[derive(Clone, Debug)]
pub struct CountQuery {
    pub target_gl: Multisegment,
    pub family: Vec<FamilyEntry>,
    pub sp: StronglyPositiveDescriptor,
    pub anchor: AnchorCondition,
}

/// One matching choice: `(i_s, j_s)` per family entry and the index of the
/// `σ_sp` term used.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Match {
    pub indices: Vec<(u64, u64)>,
    pub sp_term: usize,
}

#[derive(Clone, Debug)]
pub struct CountResult {
    pub count: BigInt,
    pub matches: Vec<Match>,
    /// Size of the unpruned search space.
    pub tuples: u128,
}

fn triangular(len: u64) -> u128 {
    let n = u128::from(len);
    (n + 1) * (n + 2) / 2
}

/// Dense encoding of supports restricted to the keys of the target.
struct Keys {
    index: BTreeMap<(CuspidalSymbol, HalfInt), usize>,
}

impl Keys {
    fn new(target: &Support) -> Self {
        let index = target
            .iter()
            .enumerate()
            .map(|(k, (rho, t, _))| ((rho.clone(), t), k))
            .collect();
        Keys { index }
    }

    /// `None` if the support uses a twist absent from the target.
    fn encode(&self, s: &Support) -> Option<Vec<(usize, u32)>> {
        s.iter()
            .map(|(rho, t, n)| self.index.get(&(rho.clone(), t)).map(|&k| (k, n)))
            .collect()
    }
}

struct Choice {
    i: u64,
    j: u64,
    gl: Vec<(usize, u32)>,
    classical: Option<Segment>,
}

struct SpTerm {
    gl: Vec<(usize, u32)>,
    classical: Support,
    coefficient: BigInt,
}

struct Search<'a> {
    target: Vec<u32>,
    choices: Vec<Vec<Choice>>,
    expected_classical: Support,
    sp_terms: &'a [SpTerm],
    current: Vec<u32>,
    stack: Vec<usize>,
    matches: Vec<Match>,
    count: BigInt,
}

impl Search<'_> {
    fn add(&mut self, gl: &[(usize, u32)]) -> bool {
        let mut ok = true;
        for &(k, n) in gl {
            self.current[k] += n;
            ok &= self.current[k] <= self.target[k];
        }
        ok
    }

    fn remove(&mut self, gl: &[(usize, u32)]) {
        for &(k, n) in gl {
            self.current[k] -= n;
        }
    }

    fn run(&mut self, sp_index: usize) {
        let depth = self.stack.len();
        if depth == self.choices.len() {
            if self.current != self.target {
                return;
            }
            let term = &self.sp_terms[sp_index];
            let mut classical = term.classical.clone();
            for (s, &c) in self.stack.iter().enumerate() {
                if let Some(seg) = &self.choices[s][c].classical {
                    classical.add_segment(seg);
                }
            }
            if classical.folded() == self.expected_classical {
                self.count += &term.coefficient;
                self.matches.push(Match {
                    indices: self
                        .stack
                        .iter()
                        .enumerate()
                        .map(|(s, &c)| (self.choices[s][c].i, self.choices[s][c].j))
                        .collect(),
                    sp_term: sp_index,
                });
            }
            return;
        }
        for c in 0..self.choices[depth].len() {
            let gl = std::mem::take(&mut self.choices[depth][c].gl);
            if self.add(&gl) {
                self.stack.push(c);
                self.run(sp_index);
                self.stack.pop();
            }
            self.remove(&gl);
            self.choices[depth][c].gl = gl;
        }
    }
}

fn sp_segments_support(sp: &StronglyPositiveDescriptor) -> Support {
    let mut s = Support::new();
    for seg in sp_embedding(sp).0 {
        s.add_segment(&seg);
    }
    s
}

fn expected_classical(q: &CountQuery) -> Result<Support> {
    let mut s = sp_segments_support(&q.sp);
    if let AnchorCondition::ExtensionOf(t) = &q.anchor {
        for &i in t {
            let e = q
                .family
                .get(i)
                .ok_or_else(|| Error::domain(format!("anchor index {i} is outside the family")))?;
            s.add_segment(&e.segment());
        }
    }
    Ok(s.folded())
}

fn sp_terms(sp: &StronglyPositiveDescriptor) -> Result<Vec<(JacquetTerm, BigInt)>> {
    let e = sp_upper_mu_star(sp, FilterMode::PositiveFiltered)?;
    Ok(e.sum.iter().map(|(t, c)| (t.clone(), c.clone())).collect())
}

/// Number of `(i_s, j_s)_s × σ_sp`-term choices whose GL part has the
/// cuspidal support of `target_gl` and whose classical part satisfies the
/// anchor condition, weighted by the `σ_sp` term coefficients.
pub fn count_multiplicity(q: &CountQuery, cap: u128) -> Result<CountResult> {
    let sp_list = sp_terms(&q.sp)?;
    let tuples = q
        .family
        .iter()
        .map(|e| triangular(e.segment().len()))
        .try_fold(sp_list.len() as u128, |acc, t| acc.checked_mul(t))
        .unwrap_or(u128::MAX);
    if tuples > cap {
        return Err(Error::QueryTooLarge { tuples, cap });
    }

    let target_support = q.target_gl.support();
    let keys = Keys::new(&target_support);
    let target: Vec<u32> = target_support.iter().map(|(_, _, n)| n).collect();
    // σ_sp terms whose GL part fits inside the target, with their original positions
    let (positions, terms): (Vec<usize>, Vec<SpTerm>) = sp_list
        .iter()
        .enumerate()
        .filter_map(|(k, (t, c))| {
            let gl = keys.encode(&t.gl_part.support())?;
            Some((
                k,
                SpTerm {
                    gl,
                    classical: t.classical_part.gl().support(),
                    coefficient: c.clone(),
                },
            ))
        })
        .unzip();

    let mut choices = Vec::with_capacity(q.family.len());
    for e in &q.family {
        let seg = e.segment();
        let n = seg.len();
        let mut options = Vec::new();
        for i in 0..=n {
            for j in 0..=i {
                let t = index_term(&seg, i, j);
                let mut gl = Support::new();
                for s in t.lower.iter().chain(&t.upper) {
                    gl.add_segment(s);
                }
                if let Some(gl) = keys.encode(&gl) {
                    options.push(Choice {
                        i,
                        j,
                        gl,
                        classical: t.classical,
                    });
                }
            }
        }
        choices.push(options);
    }

    let mut search = Search {
        target: target.clone(),
        choices,
        expected_classical: expected_classical(q)?,
        sp_terms: &terms,
        current: vec![0; target.len()],
        stack: Vec::new(),
        matches: Vec::new(),
        count: BigInt::zero(),
    };
    for (p, term) in terms.iter().enumerate() {
        if search.add(&term.gl) {
            search.run(p);
        }
        search.remove(&term.gl);
    }
    let mut matches = search.matches;
    for m in &mut matches {
        m.sp_term = positions[m.sp_term];
    }
    matches.sort();
    Ok(CountResult {
        count: search.count,
        matches,
        tuples,
    })
}

/// How a family entry contributes to the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// `Δ_s` is a factor of the target.
    Original,
    /// `Δ_s~` is a factor of the target.
    Contragredient,
    /// `Δ_s` stays in the classical part.
    Absent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub index: usize,
    pub role: Role,
    /// The values of `(i_r, j_r)` left after comparing cuspidal supports.
    pub forced: Vec<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct ForcedTrace {
    pub steps: Vec<TraceStep>,
    pub propagated: usize,
    pub brute_force: BigInt,
}

impl fmt::Display for ForcedTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "r = {} ({:?}):", s.index, s.role)?;
            for (i, j) in &s.forced {
                write!(f, " (i, j) = ({i}, {j})")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "propagated {} / brute force {}",
            self.propagated, self.brute_force
        )
    }
}

fn roles(q: &CountQuery) -> Result<Vec<Role>> {
    let mut remaining: Vec<Segment> = q.target_gl.segments().to_vec();
    let mut out = Vec::with_capacity(q.family.len());
    for e in &q.family {
        let s = e.segment();
        if let Some(p) = remaining.iter().position(|t| *t == s) {
            remaining.remove(p);
            out.push(Role::Original);
        } else if let Some(p) = remaining.iter().position(|t| *t == s.contragredient()) {
            remaining.remove(p);
            out.push(Role::Contragredient);
        } else {
            out.push(Role::Absent);
        }
    }
    if !remaining.is_empty() {
        return Err(Error::domain(format!(
            "target factors {:?} are not family segments or their contragredients",
            remaining
        )));
    }
    Ok(out)
}

/// Replays the elimination: entries are taken in order of decreasing `c`
/// within each `ρ`, and each gets the index values its role forces. The
/// resulting set of choices must equal the brute-force match set.
pub fn forced_index_trace(q: &CountQuery, cap: u128) -> Result<ForcedTrace> {
    let brute = count_multiplicity(q, cap)?;
    let roles = roles(q)?;

    let mut order: Vec<usize> = (0..q.family.len()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&q.family[a], &q.family[b]);
        ea.rho()
            .cmp(eb.rho())
            .then_with(|| eb.c().cmp(&ea.c()))
            .then_with(|| a.cmp(&b))
    });

    let anchored: BTreeSet<usize> = match &q.anchor {
        AnchorCondition::ExactSp => BTreeSet::new(),
        AnchorCondition::ExtensionOf(t) => t.clone(),
    };
    let consistent = roles
        .iter()
        .enumerate()
        .all(|(s, r)| (*r == Role::Absent) == anchored.contains(&s));

    let mut steps = Vec::with_capacity(order.len());
    for &r in &order {
        let e = &q.family[r];
        let len = e.segment().len();
        let forced = match roles[r] {
            Role::Absent => vec![(len, 0)],
            Role::Contragredient => vec![(0, 0)],
            Role::Original => {
                let short = u64::try_from((e.c() - e.b()).doubled() / 2).unwrap_or(0);
                if e.is_half_edge() {
                    vec![(short, short)]
                } else {
                    vec![(len, len), (short, short)]
                }
            }
        };
        steps.push(TraceStep {
            index: r,
            role: roles[r],
            forced,
        });
    }

    let sp_list = sp_terms(&q.sp)?;
    let trivial = sp_list
        .iter()
        .position(|(t, _)| t.gl_part.is_empty())
        .ok_or_else(|| Error::InvariantViolation("σ_sp expansion lacks 1 ⊗ σ_sp".into()))?;

    let mut propagated: Vec<Vec<(u64, u64)>> = vec![vec![(0, 0); q.family.len()]];
    if !consistent {
        propagated.clear();
    }
    for step in &steps {
        let mut next = Vec::with_capacity(propagated.len() * step.forced.len());
        for p in &propagated {
            for &v in &step.forced {
                let mut p = p.clone();
                p[step.index] = v;
                next.push(p);
            }
        }
        propagated = next;
    }
    let mut propagated: Vec<Match> = propagated
        .into_iter()
        .map(|indices| Match {
            indices,
            sp_term: trivial,
        })
        .collect();
    propagated.sort();
    propagated.dedup();

    if propagated != brute.matches {
        return Err(Error::InvariantViolation(format!(
            "elimination leaves {} choices but brute force finds {} matches",
            propagated.len(),
            brute.matches.len()
        )));
    }
    Ok(ForcedTrace {
        steps,
        propagated: propagated.len(),
        brute_force: brute.count,
    })
}

/// A query with the count the theory predicts for it.
#[derive(Clone, Debug)]
pub struct BatteryQuery {
    pub name: String,
    pub query: CountQuery,
    pub expected: BigInt,
}

fn product(segments: impl IntoIterator<Item = Segment>) -> Multisegment {
    Multisegment::from_segments(segments)
}

/// The standard queries for a setting: subrepresentations of
/// `∏_Y δ(Δ) ⋊ σ_sp`, subrepresentations of `∏_S δ(Δ) ⋊ σ`, and the
/// Langlands quotient term for every `X ⊆ S`.
pub fn standard_battery(setting: &Setting) -> Vec<BatteryQuery> {
    let sp = setting.sp().clone();
    let y = setting.y();
    let s = setting.s();
    let mut out = Vec::new();

    let y_family: Vec<FamilyEntry> = y.iter().map(|&i| setting.family()[i].clone()).collect();
    out.push(BatteryQuery {
        name: "subrepresentations of Y ⋊ σ_sp".into(),
        query: CountQuery {
            target_gl: product(y_family.iter().map(FamilyEntry::segment)),
            family: y_family,
            sp: sp.clone(),
            anchor: AnchorCondition::ExactSp,
        },
        expected: BigInt::from(1u64) << setting.l_prime(y),
    });

    // query family order: S then Y
    let all: Vec<usize> = s.iter().chain(y).copied().collect();
    let family: Vec<FamilyEntry> = all.iter().map(|&i| setting.family()[i].clone()).collect();
    let k = s.len();
    let y_positions: BTreeSet<usize> = (k..all.len()).collect();
    out.push(BatteryQuery {
        name: "subrepresentations of S ⋊ σ".into(),
        query: CountQuery {
            target_gl: product(family[..k].iter().map(FamilyEntry::segment)),
            family: family.clone(),
            sp: sp.clone(),
            anchor: AnchorCondition::ExtensionOf(y_positions.clone()),
        },
        expected: BigInt::from(1u64) << setting.l_prime(s),
    });

    for mask in 0..1u64 << k {
        let x: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 1).collect();
        let mut anchor = y_positions.clone();
        anchor.extend((0..k).filter(|p| mask >> p & 1 == 0));
        let names: Vec<String> = x.iter().map(|&p| all[p].to_string()).collect();
        out.push(BatteryQuery {
            name: format!("Langlands term X = {{{}}}", names.join(",")),
            query: CountQuery {
                target_gl: product(x.iter().map(|&p| family[p].segment().contragredient())),
                family: family.clone(),
                sp: sp.clone(),
                anchor: AnchorCondition::ExtensionOf(anchor),
            },
            expected: BigInt::from(1u64),
        });
    }
    out
}

#[derive(Clone, Debug)]
pub struct BatteryOutcome {
    pub name: String,
    pub expected: BigInt,
    pub computed: BigInt,
    pub propagated: usize,
    pub tuples: u128,
}

impl BatteryOutcome {
    pub fn passed(&self) -> bool {
        self.expected == self.computed && BigInt::from(self.propagated) == self.computed
    }
}

/// Runs every battery query, cross-checking each against the elimination.
pub fn run_battery(setting: &Setting, cap: u128) -> Result<Vec<BatteryOutcome>> {
    standard_battery(setting)
        .into_iter()
        .map(|b| {
            let counted = count_multiplicity(&b.query, cap)?;
            let trace = forced_index_trace(&b.query, cap)?;
            Ok(BatteryOutcome {
                name: b.name,
                expected: b.expected,
                computed: counted.count,
                propagated: trace.propagated,
                tuples: counted.tuples,
            })
        })
        .collect()
}
