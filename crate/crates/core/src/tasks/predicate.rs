use std::fmt;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::datastore::{GameState, GroupView};
use crate::error::{Error, Result};

/// Named parameters bound into a predicate at construction.
pub type Params = Map<String, Value>;

type EvalFn = dyn Fn(&GameState, &GroupView, &Params) -> Result<f64> + Send + Sync;
type CheckFn = dyn Fn(&Params) -> Result<()> + Send + Sync;

/// A predicate constructor: an evaluator plus parameter validation.
///
/// ```
/// use gridmmo::tasks::make_predicate;
///
/// let tick_half = make_predicate("TickHalf", |gs, _subject, _params| {
///     Ok(gs.current_tick() as f64 / 2.0)
/// });
/// let p = tick_half.instantiate(Default::default()).unwrap();
/// assert_eq!(p.name(), "TickHalf");
/// ```
#[derive(Clone)]
pub struct PredicateDef {
    name: String,
    eval: Arc<EvalFn>,
    check: Option<Arc<CheckFn>>,
}

/// Wrap an evaluator `(gs, subject, params) -> value` as a predicate constructor.
pub fn make_predicate<F>(name: &str, eval: F) -> PredicateDef
where
    F: Fn(&GameState, &GroupView, &Params) -> Result<f64> + Send + Sync + 'static,
{
    PredicateDef {
        name: name.to_string(),
        eval: Arc::new(eval),
        check: None,
    }
}

impl PredicateDef {
    /// Reject bad parameters at construction time instead of at evaluation.
    pub fn with_check<F>(mut self, check: F) -> Self
    where
        F: Fn(&Params) -> Result<()> + Send + Sync + 'static,
    {
        self.check = Some(Arc::new(check));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn instantiate(&self, params: Params) -> Result<Predicate> {
        if let Some(check) = &self.check {
            check(&params)?;
        }
        Ok(Predicate {
            name: self.name.clone(),
            params,
            eval: self.eval.clone(),
        })
    }
}

impl fmt::Debug for PredicateDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredicateDef")
            .field("name", &self.name)
            .finish()
    }
}

/// A predicate with its parameters bound.
#[derive(Clone)]
pub struct Predicate {
    name: String,
    params: Params,
    eval: Arc<EvalFn>,
}

impl Predicate {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Raw evaluator output, unclamped.
    pub fn raw(&self, gs: &GameState, subject: &GroupView) -> Result<f64> {
        (self.eval)(gs, subject, &self.params)
    }

    /// Progress in `[0, 1]`. Non-finite evaluator output is an error.
    pub fn evaluate(&self, gs: &GameState, subject: &GroupView) -> Result<f64> {
        let v = self.raw(gs, subject)?;
        if !v.is_finite() {
            return Err(Error::Logic(format!(
                "predicate {} returned {v}",
                self.name
            )));
        }
        Ok(v.clamp(0.0, 1.0))
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

/// `achieved / required`, with a zero requirement counting as done.
pub fn ratio(achieved: f64, required: f64) -> f64 {
    if required <= 0.0 {
        1.0
    } else {
        achieved / required
    }
}

fn missing(key: &str) -> Error {
    Error::Parameter(format!("missing parameter `{key}`"))
}

/// Integer parameter, required to be at least `min`.
pub fn int_param(params: &Params, key: &str, min: i64) -> Result<i64> {
    let v = params
        .get(key)
        .ok_or_else(|| missing(key))?
        .as_i64()
        .ok_or_else(|| Error::Parameter(format!("`{key}` must be an integer")))?;
    if v < min {
        return Err(Error::Parameter(format!(
            "`{key}` must be >= {min}, got {v}"
        )));
    }
    Ok(v)
}

/// Enum parameter given by name, or by numeric code through `from_code`.
pub fn enum_param<T: DeserializeOwned>(
    params: &Params,
    key: &str,
    from_code: impl Fn(i64) -> Option<T>,
) -> Result<T> {
    let v = params.get(key).ok_or_else(|| missing(key))?;
    let parsed = match v {
        Value::Number(n) => n.as_i64().and_then(&from_code),
        other => serde_json::from_value(other.clone()).ok(),
    };
    parsed.ok_or_else(|| Error::Parameter(format!("unknown value {v} for `{key}`")))
}
