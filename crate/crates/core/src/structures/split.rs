//! Splitting a square-zero operator into pieces `D_n` of degree `3 - 2n`.

use std::collections::BTreeMap;

use crate::brackets::{akman_order_check, OrderCertificate};
use crate::diffop::Operator;
use crate::error::{Error, Result};
use crate::graded::Degree;
use crate::sampling::Budget;

use super::report::{Check, Report, Verdict, Witness};

/// The index `n` with `3 - 2n = degree`, if there is one.
pub fn order_index(degree: Degree) -> Option<u32> {
    (degree.0 <= 1 && degree.0 % 2 != 0).then(|| ((3 - degree.0) / 2) as u32)
}

pub fn index_degree(n: u32) -> Degree {
    Degree(3 - 2 * n as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitComponent {
    pub n: u32,
    pub operator: Operator,
    /// Akman certificate for order `≤ n`.
    pub certificate: OrderCertificate,
}

impl SplitComponent {
    pub fn degree(&self) -> Degree {
        index_degree(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub components: Vec<SplitComponent>,
    /// Degree components not of the form `3 - 2n`.
    pub residual: Vec<(Degree, Operator)>,
}

impl SplitResult {
    pub fn has_residual(&self) -> bool {
        !self.residual.is_empty()
    }

    pub fn component(&self, n: u32) -> Option<&Operator> {
        self.components
            .iter()
            .find(|c| c.n == n)
            .map(|c| &c.operator)
    }

    pub fn sum(&self) -> Option<Operator> {
        let mut parts = self
            .components
            .iter()
            .map(|c| &c.operator)
            .chain(self.residual.iter().map(|(_, op)| op));
        let first = parts.next()?.clone();
        Some(parts.fold(first, |acc, op| &acc + op))
    }
}

/// `D = Σ_n D_n` with `D_n` of degree `3 - 2n`, each order-certified.
pub fn degree_split(d: &Operator, budget: &Budget) -> Result<SplitResult> {
    let sq = d.square_zero();
    if !sq.holds {
        return Err(Error::Hypothesis(format!(
            "D² = 0 fails: D² = {}",
            sq.square
        )));
    }
    let parts = d.degree_components();
    if let Some(d1) = parts.get(&Degree(1)) {
        let order = d1.structural_order().order;
        if order > 1 {
            return Err(Error::Hypothesis(format!(
                "the degree +1 component has order {order}, not at most 1"
            )));
        }
    }
    let mut components = Vec::new();
    let mut residual = Vec::new();
    for (deg, op) in parts.into_iter().rev() {
        match order_index(deg) {
            Some(n) => components.push(SplitComponent {
                n,
                certificate: akman_order_check(&op, n, budget),
                operator: op,
            }),
            None => residual.push((deg, op)),
        }
    }
    Ok(SplitResult {
        components,
        residual,
    })
}

/// One degree component of `D² = Σ_{i,j} D_i D_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionIdentity {
    pub degree: Degree,
    /// Pairs of component degrees `(i, j)` contributing `D_i D_j`.
    pub terms: Vec<(Degree, Degree)>,
    pub residual: Operator,
}

impl ExpansionIdentity {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    /// For example `D1D3 + D2D2 + D3D1` when every degree is `3 - 2n`.
    pub fn label(&self) -> String {
        let name = |d: Degree| match order_index(d) {
            Some(n) => format!("D{n}"),
            None => format!("D[{d}]"),
        };
        self.terms
            .iter()
            .map(|&(i, j)| format!("{}{}", name(i), name(j)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The per-degree pieces of `D²`, each as an exact operator identity.
pub fn expansion_identities(d: &Operator) -> Result<Vec<ExpansionIdentity>> {
    let parts = d.degree_components();
    let mut grouped: BTreeMap<Degree, (Vec<(Degree, Degree)>, Operator)> = BTreeMap::new();
    for (di, a) in parts.iter().rev() {
        for (dj, b) in parts.iter().rev() {
            let entry = grouped
                .entry(*di + *dj)
                .or_insert_with(|| (Vec::new(), Operator::zero(d.table())));
            entry.0.push((*di, *dj));
            entry.1 = &entry.1 + &a.compose(b)?;
        }
    }
    Ok(grouped
        .into_iter()
        .rev()
        .map(|(degree, (terms, residual))| ExpansionIdentity {
            degree,
            terms,
            residual,
        })
        .collect())
}

/// Split `D`, certify every piece and verify the expansion identities.
pub fn check_split(d: &Operator, budget: &Budget) -> Result<(SplitResult, Report)> {
    let split = degree_split(d, budget)?;
    let mut report = Report::new();
    let sum = split.sum().unwrap_or_else(|| Operator::zero(d.table()));
    report.push(Check::exact("sum", &(&sum - d)));
    for c in &split.components {
        let cert = &c.certificate;
        let mut check = Check::new(
            format!("D{}-order", c.n),
            if cert.bound_holds {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        );
        check.tested = cert.tested;
        check.exhaustive = cert.exhaustive;
        if let Some(f) = &cert.failure {
            check.witness = Some(Witness::Elements(f.clone()));
        }
        check.note = Some(format!(
            "degree {}, structural order {}",
            c.degree(),
            cert.structural.order
        ));
        report.push(check.with_residual(Witness::Operator(c.operator.clone())));
    }
    let mut residual = Check::holds("degrees-of-form-3-2n", !split.has_residual());
    if let Some((deg, op)) = split.residual.first() {
        residual = residual
            .with_residual(Witness::Operator(op.clone()))
            .with_note(format!("component of degree {deg}"));
    }
    report.push(residual);
    for id in expansion_identities(d)? {
        report.push(
            Check::exact(format!("square-degree-{}", id.degree), &id.residual)
                .with_note(format!("{} = 0", id.label())),
        );
    }
    Ok((split, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{poisson_model, polyvector_model, split_lab_model};
    use crate::text::parse_operator;

    fn budget() -> Budget {
        Budget::new(2, 300, 9)
    }

    #[test]
    fn index_round_trip() {
        for n in 1..6 {
            assert_eq!(order_index(index_degree(n)), Some(n));
        }
        assert_eq!(order_index(Degree(3)), None);
        assert_eq!(order_index(Degree(0)), None);
        assert_eq!(order_index(Degree(-2)), None);
    }

    #[test]
    fn differential_alone() {
        let p = poisson_model().unwrap();
        let s = degree_split(&p.d, &budget()).unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].n, 1);
        assert_eq!(s.components[0].operator, p.d);
        assert!(s.components[0].certificate.bound_holds);
    }

    #[test]
    fn differential_plus_laplacian() {
        let p = poisson_model().unwrap();
        let s = degree_split(&p.total, &budget()).unwrap();
        let ns: Vec<u32> = s.components.iter().map(|c| c.n).collect();
        assert_eq!(ns, vec![1, 2]);
        assert_eq!(s.component(2), Some(&p.base.delta));
        assert!(s.components.iter().all(|c| c.certificate.bound_holds));
    }

    #[test]
    fn three_pieces() {
        let lab = split_lab_model().unwrap();
        let (s, r) = check_split(&lab.total, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        for (c, part) in s.components.iter().zip(&lab.parts) {
            assert_eq!(&c.operator, part);
            assert!(c.certificate.passed());
        }
        let ids = expansion_identities(&lab.total).unwrap();
        let degrees: Vec<i64> = ids.iter().map(|i| i.degree.0).collect();
        assert_eq!(degrees, vec![2, 0, -2, -4, -6]);
        assert_eq!(ids[2].label(), "D1D3 + D2D2 + D3D1");
        assert!(ids.iter().all(ExpansionIdentity::holds));
    }

    #[test]
    fn hypotheses_are_enforced() {
        let m = polyvector_model(1).unwrap();
        let bad = parse_operator(&m.table, "d[xi1] + d[x1]").unwrap();
        assert!(matches!(
            degree_split(&bad, &budget()),
            Err(Error::Hypothesis(_))
        ));
        let t = crate::algebra::GeneratorTable::new([("a", 1), ("b", 1), ("c", 3)]).unwrap();
        let high = parse_operator(&t, "c*d[a]*d[b]").unwrap();
        assert!(high.is_square_zero());
        assert!(matches!(
            degree_split(&high, &budget()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn residual_degree_is_flagged() {
        let t = crate::algebra::GeneratorTable::new([("a", 1), ("b", 4)]).unwrap();
        let d = parse_operator(&t, "b*d[a]").unwrap();
        let (s, r) = check_split(&d, &budget()).unwrap();
        assert!(s.has_residual());
        assert_eq!(
            r.get("degrees-of-form-3-2n").unwrap().verdict,
            Verdict::Fail
        );
    }
}
