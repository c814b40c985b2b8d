//! Multiplicative relations among the nine ratios of a 2×3 table.
//!
//! Writing `r[kind](c)` for the ratio of the 2×2 block left after deleting
//! column `c`, every 2×3 table satisfies
//!
//! ```text
//! r[parallel](0) r[parallel](2) = r[parallel](1)
//! r[cross](0)    r[cross](2)    = r[cross](1)
//! r[cross](0) = r[equal](2) / r[equal](1)
//! r[cross](1) = r[equal](2) / r[equal](0)
//! r[cross](2) = r[equal](1) / r[equal](0)
//! ```
//!
//! [`closure`] uses these as rewrite rules to extend a partial assignment of
//! ratio values and to detect assignments no table can realize. In log
//! coordinates the nine ratios span a 5-dimensional space, so they satisfy
//! four independent linear relations; the five above have rank four and
//! generate all of them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tables::{ProbTable2x3, RatioKind};

/// Relative tolerance, in log space, used by [`closure`] to flag conflicts.
pub const CLOSURE_TOL: f64 = 1e-12;

/// A ratio of a 2×3 table: its kind and the deleted column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatioSlot {
    pub kind: RatioKind,
    pub deleted_col: usize,
}

impl RatioSlot {
    pub const fn new(kind: RatioKind, deleted_col: usize) -> Self {
        Self { kind, deleted_col }
    }

    /// All nine slots, kind-major.
    pub fn all() -> impl Iterator<Item = RatioSlot> {
        RatioKind::ALL
            .into_iter()
            .flat_map(|kind| (0..3).map(move |c| RatioSlot::new(kind, c)))
    }

    pub fn eval(&self, t: &ProbTable2x3) -> f64 {
        t.ratio(self.kind, self.deleted_col).expect("validated column")
    }
}

impl fmt::Display for RatioSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.kind, self.deleted_col)
    }
}

/// One prescribed ratio value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: RatioKind,
    pub deleted_col: usize,
    pub value: f64,
}

impl Constraint {
    pub fn new(kind: RatioKind, deleted_col: usize, value: f64) -> Self {
        Self {
            kind,
            deleted_col,
            value,
        }
    }

    pub fn slot(&self) -> RatioSlot {
        RatioSlot::new(self.kind, self.deleted_col)
    }
}

/// A set of prescribed ratios, at most one per slot, all strictly positive.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Constraint>", into = "Vec<Constraint>")]
pub struct RatioAssignment {
    constraints: Vec<Constraint>,
}

impl RatioAssignment {
    pub fn new(constraints: Vec<Constraint>) -> Result<Self> {
        let mut seen = Vec::with_capacity(constraints.len());
        for c in &constraints {
            if c.deleted_col > 2 {
                return Err(Error::BadColumn(c.deleted_col));
            }
            if !(c.value.is_finite() && c.value > 0.0) {
                return Err(Error::NonPositiveRatio {
                    name: "constraint value",
                    value: c.value,
                });
            }
            if seen.contains(&c.slot()) {
                return Err(Error::DuplicateConstraint(c.slot().to_string()));
            }
            seen.push(c.slot());
        }
        Ok(Self { constraints })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Shorthand for tests and examples: `(kind, deleted_col, value)` triples.
    pub fn from_triples(items: &[(RatioKind, usize, f64)]) -> Result<Self> {
        Self::new(
            items
                .iter()
                .map(|&(k, c, v)| Constraint::new(k, c, v))
                .collect(),
        )
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn get(&self, slot: RatioSlot) -> Option<f64> {
        self.constraints
            .iter()
            .find(|c| c.slot() == slot)
            .map(|c| c.value)
    }
}

impl TryFrom<Vec<Constraint>> for RatioAssignment {
    type Error = Error;

    fn try_from(v: Vec<Constraint>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RatioAssignment> for Vec<Constraint> {
    fn from(a: RatioAssignment) -> Self {
        a.constraints
    }
}

/// The five identities, each as `prod(lhs^e) = prod(rhs^e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    ParallelProduct,
    CrossProduct,
    Cross0FromEqual,
    Cross1FromEqual,
    Cross2FromEqual,
}

type Term = (RatioSlot, i32);

const fn term(kind: RatioKind, col: usize, exp: i32) -> Term {
    (RatioSlot::new(kind, col), exp)
}

use RatioKind::{Cross as X, Equal as E, Parallel as P};

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::ParallelProduct,
        Relation::CrossProduct,
        Relation::Cross0FromEqual,
        Relation::Cross1FromEqual,
        Relation::Cross2FromEqual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::ParallelProduct => "parallel_product",
            Relation::CrossProduct => "cross_product",
            Relation::Cross0FromEqual => "cross0_from_equal",
            Relation::Cross1FromEqual => "cross1_from_equal",
            Relation::Cross2FromEqual => "cross2_from_equal",
        }
    }

    pub fn sides(self) -> (&'static [Term], &'static [Term]) {
        const PP: ([Term; 2], [Term; 1]) = ([term(P, 0, 1), term(P, 2, 1)], [term(P, 1, 1)]);
        const XP: ([Term; 2], [Term; 1]) = ([term(X, 0, 1), term(X, 2, 1)], [term(X, 1, 1)]);
        const X0: ([Term; 1], [Term; 2]) = ([term(X, 0, 1)], [term(E, 2, 1), term(E, 1, -1)]);
        const X1: ([Term; 1], [Term; 2]) = ([term(X, 1, 1)], [term(E, 2, 1), term(E, 0, -1)]);
        const X2: ([Term; 1], [Term; 2]) = ([term(X, 2, 1)], [term(E, 1, 1), term(E, 0, -1)]);
        match self {
            Relation::ParallelProduct => (&PP.0, &PP.1),
            Relation::CrossProduct => (&XP.0, &XP.1),
            Relation::Cross0FromEqual => (&X0.0, &X0.1),
            Relation::Cross1FromEqual => (&X1.0, &X1.1),
            Relation::Cross2FromEqual => (&X2.0, &X2.1),
        }
    }

    fn slots(self) -> impl Iterator<Item = RatioSlot> {
        let (l, r) = self.sides();
        l.iter().chain(r).map(|(s, _)| *s)
    }

    /// Evaluates both sides given a lookup for every slot involved.
    pub fn evaluate(self, value: impl Fn(RatioSlot) -> f64) -> (f64, f64) {
        let side = |terms: &[Term]| {
            terms
                .iter()
                .fold(1.0, |acc, &(s, e)| acc * value(s).powi(e))
        };
        let (l, r) = self.sides();
        (side(l), side(r))
    }

    /// Solves for `target` with every other slot known.
    fn solve_for(self, target: RatioSlot, value: impl Fn(RatioSlot) -> f64) -> f64 {
        let (l, r) = self.sides();
        // move everything except `target` to the other side
        let (own, other) = if l.iter().any(|(s, _)| *s == target) {
            (l, r)
        } else {
            (r, l)
        };
        let mut acc = other.iter().fold(1.0, |acc, &(s, e)| acc * value(s).powi(e));
        let mut target_exp = 0;
        for &(s, e) in own {
            if s == target {
                target_exp = e;
            } else {
                acc *= value(s).powi(-e);
            }
        }
        match target_exp {
            1 => acc,
            -1 => 1.0 / acc,
            e => acc.powf(1.0 / e as f64),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Consistent,
    Inconsistent,
}

/// One evaluated identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub status: Status,
    /// Identities that failed, with both sides.
    pub violations: Vec<RelationCheck>,
    /// Values implied for unassigned slots, in derivation order.
    pub derived: Vec<Constraint>,
    /// Every identity whose slots were all known.
    pub checks: Vec<RelationCheck>,
}

impl ConsistencyReport {
    fn from_checks(checks: Vec<RelationCheck>, derived: Vec<Constraint>) -> Self {
        let violations: Vec<_> = checks.iter().filter(|c| !c.holds).copied().collect();
        Self {
            status: if violations.is_empty() {
                Status::Consistent
            } else {
                Status::Inconsistent
            },
            violations,
            derived,
            checks,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.status == Status::Consistent
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn log_close(a: f64, b: f64, tol: f64) -> bool {
    let (la, lb) = (a.ln(), b.ln());
    (la - lb).abs() <= tol * la.abs().max(lb.abs()).max(1.0)
}

/// Evaluates all five identities on a table, each to relative tolerance `tol`.
pub fn check_relations(t: &ProbTable2x3, tol: f64) -> ConsistencyReport {
    let checks = Relation::ALL
        .iter()
        .map(|&relation| {
            let (lhs, rhs) = relation.evaluate(|s| s.eval(t));
            RelationCheck {
                relation,
                lhs,
                rhs,
                holds: rel_close(lhs, rhs, tol),
            }
        })
        .collect();
    ConsistencyReport::from_checks(checks, Vec::new())
}

/// Extends an assignment with every value the five identities force, and
/// reports the identities it violates.
///
/// Sound with respect to the identities; see the module docs for why the
/// rule set is also complete for determinacy.
pub fn closure(a: &RatioAssignment) -> ConsistencyReport {
    let mut known: BTreeMap<RatioSlot, f64> =
        a.constraints().iter().map(|c| (c.slot(), c.value)).collect();
    let mut derived = Vec::new();

    loop {
        let mut progressed = false;
        for relation in Relation::ALL {
            let unknown: Vec<_> = relation.slots().filter(|s| !known.contains_key(s)).collect();
            if let [target] = unknown[..] {
                let value = relation.solve_for(target, |s| known[&s]);
                known.insert(target, value);
                derived.push(Constraint::new(target.kind, target.deleted_col, value));
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }

    let checks = Relation::ALL
        .iter()
        .filter(|r| r.slots().all(|s| known.contains_key(&s)))
        .map(|&relation| {
            let (lhs, rhs) = relation.evaluate(|s| known[&s]);
            RelationCheck {
                relation,
                lhs,
                rhs,
                holds: log_close(lhs, rhs, CLOSURE_TOL),
            }
        })
        .collect();
    ConsistencyReport::from_checks(checks, derived)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_table_is_consistent() {
        let r = check_relations(&ProbTable2x3::uniform(), 1e-12);
        assert!(r.is_consistent());
        assert_eq!(r.checks.len(), 5);
        for c in &r.checks {
            assert_relative_eq!(c.lhs, 1.0, max_relative = 1e-14);
            assert_relative_eq!(c.rhs, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn worked_table_relations() {
        let t = ProbTable2x3::new([0.1, 0.2, 0.3, 0.1, 0.2, 0.1], 1e-9).unwrap();
        let r = check_relations(&t, 1e-12);
        assert!(r.is_consistent());
        let pp = r.checks[0];
        assert_eq!(pp.relation, Relation::ParallelProduct);
        // (4/3)(1/4) on the left, 1/3 on the right
        assert_relative_eq!(pp.lhs, 1.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(pp.rhs, 1.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn closure_derives_product() {
        let a = RatioAssignment::from_triples(&[(P, 0, 2.0), (P, 2, 3.0)]).unwrap();
        let r = closure(&a);
        assert!(r.is_consistent());
        assert_eq!(r.derived, vec![Constraint::new(P, 1, 6.0)]);
    }

    #[test]
    fn closure_flags_product_violation() {
        let a = RatioAssignment::from_triples(&[(X, 0, 1.0), (X, 1, 1.0), (X, 2, 2.0)]).unwrap();
        let r = closure(&a);
        assert_eq!(r.status, Status::Inconsistent);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].relation, Relation::CrossProduct);
        assert_eq!((r.violations[0].lhs, r.violations[0].rhs), (2.0, 1.0));
    }

    #[test]
    fn closure_from_equal_ratios() {
        let a = RatioAssignment::from_triples(&[(E, 0, 1.0), (E, 1, 1.0), (E, 2, 1.0)]).unwrap();
        let r = closure(&a);
        assert!(r.is_consistent());
        let mut slots: Vec<_> = r.derived.iter().map(|c| (c.slot(), c.value)).collect();
        slots.sort_by_key(|(s, _)| *s);
        assert_eq!(
            slots,
            vec![
                (RatioSlot::new(X, 0), 1.0),
                (RatioSlot::new(X, 1), 1.0),
                (RatioSlot::new(X, 2), 1.0)
            ]
        );
    }

    #[test]
    fn solve_for_inverted_terms() {
        // r=^(1) from r×^(0) and r=^(2): r=^(1) = r=^(2) / r×^(0)
        let a = RatioAssignment::from_triples(&[(X, 0, 4.0), (X, 1, 3.0), (E, 2, 2.0)]).unwrap();
        let r = closure(&a);
        assert!(r.is_consistent());
        let get = |k, c| r.derived.iter().find(|d| d.slot() == RatioSlot::new(k, c)).unwrap().value;
        assert_relative_eq!(get(X, 2), 0.75, max_relative = 1e-15);
        assert_relative_eq!(get(E, 1), 0.5, max_relative = 1e-15);
        assert_relative_eq!(get(E, 0), 2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn assignment_validation() {
        assert!(matches!(
            RatioAssignment::from_triples(&[(X, 0, 1.0), (X, 0, 2.0)]),
            Err(Error::DuplicateConstraint(_))
        ));
        assert!(RatioAssignment::from_triples(&[(X, 3, 1.0)]).is_err());
        assert!(RatioAssignment::from_triples(&[(X, 0, -1.0)]).is_err());
    }

    #[test]
    fn assignment_json_shape() {
        let a: RatioAssignment = serde_json::from_str(
            r#"[{"kind":"cross","deleted_col":1,"value":1},{"kind":"equal","deleted_col":2,"value":2.5}]"#,
        )
        .unwrap();
        assert_eq!(a.get(RatioSlot::new(E, 2)), Some(2.5));
        let bad: std::result::Result<RatioAssignment, _> =
            serde_json::from_str(r#"[{"kind":"cross","deleted_col":1,"value":0}]"#);
        assert!(bad.is_err());
    }
}
