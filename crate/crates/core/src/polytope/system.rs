use serde_json::{json, Map, Value};

use crate::polytope::lp::{self, LpOutcome};
use crate::polytope::PolytopeError;
use crate::scalar::{le_eps, Scalar};

/// `coeffs · x ≤ rhs`, with coefficients aligned to the owning system's
/// variable order.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearInequality<S> {
    pub coeffs: Vec<S>,
    pub rhs: S,
    pub label: Option<String>,
}

impl<S: Scalar> LinearInequality<S> {
    pub fn new(coeffs: Vec<S>, rhs: S) -> Self {
        LinearInequality {
            coeffs,
            rhs,
            label: None,
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn lhs(&self, x: &[S]) -> S {
        self.coeffs
            .iter()
            .zip(x)
            .fold(S::zero(), |acc, (a, v)| acc + a.clone() * v.clone())
    }

    pub fn is_zero(&self, eps: &S) -> bool {
        self.coeffs.iter().all(|a| a.abs() <= *eps)
    }

    /// Same row scaled so the largest coefficient magnitude is one.
    pub(crate) fn normalized(&self, eps: &S) -> Self {
        let scale = self
            .coeffs
            .iter()
            .map(|a| a.abs())
            .fold(S::zero(), crate::scalar::smax);
        if scale <= *eps {
            return self.clone();
        }
        LinearInequality {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.clone() / scale.clone())
                .collect(),
            rhs: self.rhs.clone() / scale,
            label: self.label.clone(),
        }
    }
}

/// A finite set of `≤` rows over named variables, some of them constrained
/// nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceSystem<S> {
    variables: Vec<String>,
    nonneg: Vec<bool>,
    rows: Vec<LinearInequality<S>>,
    eps: S,
}

impl<S: Scalar> HalfspaceSystem<S> {
    pub fn new<T: AsRef<str>>(variables: &[T]) -> Result<Self, PolytopeError> {
        let mut names: Vec<String> = Vec::with_capacity(variables.len());
        for v in variables {
            let v = v.as_ref().to_string();
            if names.contains(&v) {
                return Err(PolytopeError::DuplicateVariable(v));
            }
            names.push(v);
        }
        Ok(HalfspaceSystem {
            nonneg: vec![false; names.len()],
            variables: names,
            rows: Vec::new(),
            eps: S::default_eps(),
        })
    }

    pub fn with_eps(mut self, eps: S) -> Self {
        self.eps = eps;
        self
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[LinearInequality<S>] {
        &self.rows
    }

    pub fn nonneg(&self) -> &[bool] {
        &self.nonneg
    }

    pub fn eps(&self) -> &S {
        &self.eps
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolytopeError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolytopeError::UnknownVariable(name.to_string()))
    }

    pub fn set_nonneg(&mut self, name: &str) -> Result<(), PolytopeError> {
        let i = self.var_index(name)?;
        self.nonneg[i] = true;
        Ok(())
    }

    pub fn all_nonneg(mut self) -> Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    fn dense(&self, terms: &[(&str, S)]) -> Result<Vec<S>, PolytopeError> {
        let mut c = vec![S::zero(); self.dim()];
        for (name, a) in terms {
            let i = self.var_index(name)?;
            c[i] = c[i].clone() + a.clone();
        }
        Ok(c)
    }

    pub fn push(&mut self, row: LinearInequality<S>) -> Result<(), PolytopeError> {
        if row.coeffs.len() != self.dim() {
            return Err(PolytopeError::Dimension {
                expected: self.dim(),
                got: row.coeffs.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn add_le(
        &mut self,
        label: &str,
        terms: &[(&str, S)],
        rhs: S,
    ) -> Result<(), PolytopeError> {
        let c = self.dense(terms)?;
        self.push(LinearInequality::new(c, rhs).labeled(label))
    }

    pub fn add_ge(
        &mut self,
        label: &str,
        terms: &[(&str, S)],
        rhs: S,
    ) -> Result<(), PolytopeError> {
        let c = self.dense(terms)?.into_iter().map(|a| -a).collect();
        self.push(LinearInequality::new(c, -rhs).labeled(label))
    }

    /// Adds `terms = rhs` as a pair of opposite rows.
    pub fn add_eq(
        &mut self,
        label: &str,
        terms: &[(&str, S)],
        rhs: S,
    ) -> Result<(), PolytopeError> {
        self.add_le(label, terms, rhs.clone())?;
        self.add_ge(label, terms, rhs)
    }

    pub(crate) fn from_parts(
        variables: Vec<String>,
        nonneg: Vec<bool>,
        rows: Vec<LinearInequality<S>>,
        eps: S,
    ) -> Self {
        HalfspaceSystem {
            variables,
            nonneg,
            rows,
            eps,
        }
    }

    /// Point membership, including the nonnegativity constraints.
    pub fn contains(&self, x: &[S]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let zero = S::zero();
        let signs_ok = x
            .iter()
            .zip(&self.nonneg)
            .all(|(v, nn)| !nn || le_eps(&zero, v, &self.eps));
        signs_ok
            && self
                .rows
                .iter()
                .all(|r| le_eps(&r.lhs(x), &r.rhs, &self.eps))
    }

    pub fn maximize(&self, objective: &[S]) -> LpOutcome<S> {
        lp::solve(&self.nonneg, &self.rows, Some(objective), &self.eps)
    }

    pub fn is_feasible(&self) -> bool {
        lp::solve(&self.nonneg, &self.rows, None, &self.eps).is_feasible()
    }

    /// Whether fixing the named variables leaves a feasible system.
    pub fn has_extension(&self, fixed: &[(&str, S)]) -> Result<bool, PolytopeError> {
        let mut value: Vec<Option<S>> = vec![None; self.dim()];
        for (name, v) in fixed {
            let i = self.var_index(name)?;
            if self.nonneg[i] && !le_eps(&S::zero(), v, &self.eps) {
                return Ok(false);
            }
            value[i] = Some(v.clone());
        }
        let free: Vec<usize> = (0..self.dim()).filter(|&j| value[j].is_none()).collect();
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut rhs = r.rhs.clone();
            for (a, v) in r.coeffs.iter().zip(&value) {
                if let Some(v) = v {
                    rhs = rhs - a.clone() * v.clone();
                }
            }
            let coeffs: Vec<S> = free.iter().map(|&j| r.coeffs[j].clone()).collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                if !le_eps(&S::zero(), &rhs, &self.eps) {
                    return Ok(false);
                }
                continue;
            }
            rows.push(LinearInequality::new(coeffs, rhs));
        }
        if rows.is_empty() {
            return Ok(true);
        }
        let nonneg: Vec<bool> = free.iter().map(|&j| self.nonneg[j]).collect();
        Ok(lp::solve(&nonneg, &rows, None, &self.eps).is_feasible())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut coeffs = Map::new();
                for (name, a) in self.variables.iter().zip(&r.coeffs) {
                    if !a.is_zero() {
                        coeffs.insert(name.clone(), a.to_json());
                    }
                }
                let mut o = Map::new();
                o.insert("coeffs".into(), Value::Object(coeffs));
                o.insert("rhs".into(), r.rhs.to_json());
                if let Some(l) = &r.label {
                    o.insert("label".into(), Value::String(l.clone()));
                }
                Value::Object(o)
            })
            .collect();
        let nonneg: Vec<&String> = self
            .variables
            .iter()
            .zip(&self.nonneg)
            .filter(|(_, nn)| **nn)
            .map(|(v, _)| v)
            .collect();
        json!({
            "mode": if S::EXACT { "exact" } else { "approx" },
            "variables": self.variables,
            "nonneg": nonneg,
            "inequalities": rows,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, PolytopeError> {
        let bad = |m: &str| PolytopeError::Malformed(m.to_string());
        let vars: Vec<String> = v
            .get("variables")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `variables` array"))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("variable names must be strings"))
            })
            .collect::<Result<_, _>>()?;
        let mut sys = HalfspaceSystem::new(&vars)?;
        if let Some(nn) = v.get("nonneg") {
            for name in nn
                .as_array()
                .ok_or_else(|| bad("`nonneg` must be an array"))?
            {
                sys.set_nonneg(
                    name.as_str()
                        .ok_or_else(|| bad("nonneg entries must be strings"))?,
                )?;
            }
        }
        let rows = v
            .get("inequalities")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `inequalities` array"))?;
        for r in rows {
            let coeffs = r
                .get("coeffs")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("inequality without `coeffs` object"))?;
            let mut dense = vec![S::zero(); sys.dim()];
            for (name, a) in coeffs {
                let i = sys.var_index(name)?;
                dense[i] = S::from_json(a).ok_or_else(|| bad("coefficient is not a number"))?;
            }
            let rhs = r
                .get("rhs")
                .and_then(S::from_json)
                .ok_or_else(|| bad("inequality without numeric `rhs`"))?;
            let mut row = LinearInequality::new(dense, rhs);
            row.label = r.get("label").and_then(Value::as_str).map(str::to_string);
            sys.push(row)?;
        }
        Ok(sys)
    }
}
