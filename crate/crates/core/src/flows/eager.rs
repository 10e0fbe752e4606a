//! Define-by-run search: hyper values are called inline while a program runs.
//!
//! A first run in collect mode registers one decision point per call, in call
//! order, and gets defaults back (the first candidate, or the minimum). Later
//! runs in apply mode consume the decisions of a DNA in the same order.

use std::time::Instant;

use thiserror::Error;

use super::{FlowError, FlowReport, LoopConfig, RunOptions};
use crate::abstraction::{Decision, DecisionPoint, DecisionSpec, Dna, PointKind};
use crate::algorithms::{AlgorithmError, Reward};
use crate::hyper::HyperError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EagerError {
    #[error("decision stream mismatch at call {call}: {reason}")]
    DecisionStreamMismatch { call: usize, reason: String },
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error("program failed: {0}")]
    Program(String),
}

pub type Thunk<'a, T> = Box<dyn FnOnce(&mut EagerContext) -> Result<T, EagerError> + 'a>;

/// A candidate of an eager choice. Thunks run only when chosen, so they can
/// hold nested choices.
pub enum Candidate<'a, T> {
    Value(T),
    Thunk(Thunk<'a, T>),
}

impl<'a, T> Candidate<'a, T> {
    pub fn thunk(f: impl FnOnce(&mut EagerContext) -> Result<T, EagerError> + 'a) -> Self {
        Candidate::Thunk(Box::new(f))
    }
}

struct Frame {
    points: Vec<DecisionPoint>,
    decisions: Vec<Decision>,
    cursor: usize,
}

enum Mode {
    Collect(Vec<Vec<DecisionPoint>>),
    Apply(Vec<Frame>),
}

pub struct EagerContext {
    mode: Mode,
    calls: usize,
}

impl EagerContext {
    pub fn collect() -> Self {
        EagerContext {
            mode: Mode::Collect(vec![Vec::new()]),
            calls: 0,
        }
    }

    pub fn apply(spec: &DecisionSpec, dna: &Dna) -> Self {
        let frame = Frame {
            points: spec.points.clone(),
            decisions: dna.0.clone(),
            cursor: 0,
        };
        EagerContext {
            mode: Mode::Apply(vec![frame]),
            calls: 0,
        }
    }

    /// The spec registered by a collect run.
    pub fn into_spec(self) -> DecisionSpec {
        match self.mode {
            Mode::Collect(mut scopes) => DecisionSpec::new(scopes.pop().unwrap_or_default()),
            Mode::Apply(_) => DecisionSpec::default(),
        }
    }

    /// Checks that an apply run used every decision.
    pub fn finish(&self) -> Result<(), EagerError> {
        if let Mode::Apply(frames) = &self.mode {
            if let Some(frame) = frames.last() {
                if frame.cursor < frame.points.len() {
                    return Err(EagerError::DecisionStreamMismatch {
                        call: self.calls,
                        reason: "fewer decisions used than registered".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Error for the call in progress.
    fn mismatch(&self, reason: &str) -> EagerError {
        EagerError::DecisionStreamMismatch {
            call: self.calls - 1,
            reason: reason.to_string(),
        }
    }

    fn register(&mut self, point: DecisionPoint) {
        if let Mode::Collect(scopes) = &mut self.mode {
            scopes.last_mut().expect("collect scope").push(point);
        }
    }

    /// Takes the next decision and checks it against `expected`.
    fn next_decision(
        &mut self,
        expected: &PointKind,
    ) -> Result<(Decision, DecisionPoint), EagerError> {
        let call = self.calls - 1;
        let Mode::Apply(frames) = &mut self.mode else {
            unreachable!("only called in apply mode");
        };
        let frame = frames.last_mut().expect("apply frame");
        let Some(point) = frame.points.get(frame.cursor).cloned() else {
            return Err(EagerError::DecisionStreamMismatch {
                call,
                reason: "more decisions requested than registered".into(),
            });
        };
        let same = match (&point.kind, expected) {
            (PointKind::Choice { k, n, .. }, PointKind::Choice { n: n2, .. }) => *k == 1 && n == n2,
            (a, b) => a == b,
        };
        if !same {
            return Err(EagerError::DecisionStreamMismatch {
                call,
                reason: format!("call does not match registered point {:?}", point.kind),
            });
        }
        let decision = frame.decisions[frame.cursor].clone();
        frame.cursor += 1;
        Ok((decision, point))
    }

    pub fn oneof<T>(&mut self, candidates: Vec<Candidate<'_, T>>) -> Result<T, EagerError> {
        if candidates.is_empty() {
            return Err(HyperError::EmptyCandidates.into());
        }
        let call = self.calls;
        self.calls += 1;
        let n = candidates.len();
        if let Mode::Collect(_) = self.mode {
            let mut specs = Vec::with_capacity(n);
            let mut first = None;
            for candidate in candidates {
                self.push_scope();
                let value = match candidate {
                    Candidate::Value(v) => Ok(v),
                    Candidate::Thunk(f) => f(self),
                };
                let spec = self.pop_scope();
                specs.push(spec);
                let value = value?;
                if first.is_none() {
                    first = Some(value);
                }
            }
            self.register(DecisionPoint {
                id: format!("#{call}"),
                hints: None,
                kind: PointKind::Choice {
                    k: 1,
                    n,
                    distinct: false,
                    sorted: false,
                    candidates: specs,
                },
            });
            return Ok(first.expect("non-empty candidates"));
        }
        let expected = PointKind::Choice {
            k: 1,
            n,
            distinct: false,
            sorted: false,
            candidates: Vec::new(),
        };
        let (decision, point) = self.next_decision(&expected)?;
        let item = match decision {
            Decision::Choice(mut items) if items.len() == 1 && items[0].index < n => {
                items.remove(0)
            }
            _ => return Err(self.mismatch("decision is not a single in-range index")),
        };
        let PointKind::Choice {
            candidates: specs, ..
        } = point.kind
        else {
            unreachable!("kind checked above");
        };
        match candidates
            .into_iter()
            .nth(item.index)
            .expect("index in range")
        {
            Candidate::Value(v) => Ok(v),
            Candidate::Thunk(f) => {
                if let Mode::Apply(frames) = &mut self.mode {
                    frames.push(Frame {
                        points: specs[item.index].points.clone(),
                        decisions: item.children.0,
                        cursor: 0,
                    });
                }
                let value = f(self);
                let unused = match &mut self.mode {
                    Mode::Apply(frames) => frames.pop().is_some_and(|f| f.cursor < f.points.len()),
                    Mode::Collect(_) => false,
                };
                let value = value?;
                if unused {
                    return Err(EagerError::DecisionStreamMismatch {
                        call,
                        reason: "nested candidate used fewer decisions than registered".into(),
                    });
                }
                Ok(value)
            }
        }
    }

    /// Eager choice over plain values.
    pub fn oneof_values<T: Clone>(&mut self, values: &[T]) -> Result<T, EagerError> {
        self.oneof(values.iter().cloned().map(Candidate::Value).collect())
    }

    pub fn intv(&mut self, min: i64, max: i64) -> Result<i64, EagerError> {
        crate::hyper::HyperKind::int_range(min, max)?;
        self.calls += 1;
        let kind = PointKind::Int { min, max };
        if let Mode::Collect(_) = self.mode {
            self.register(DecisionPoint {
                id: format!("#{}", self.calls - 1),
                hints: None,
                kind,
            });
            return Ok(min);
        }
        match self.next_decision(&kind)?.0 {
            Decision::Int(v) => Ok(v),
            _ => Err(self.mismatch("expected an integer decision")),
        }
    }

    pub fn floatv(&mut self, min: f64, max: f64) -> Result<f64, EagerError> {
        crate::hyper::HyperKind::float_range(min, max)?;
        self.calls += 1;
        let kind = PointKind::Float { min, max };
        if let Mode::Collect(_) = self.mode {
            self.register(DecisionPoint {
                id: format!("#{}", self.calls - 1),
                hints: None,
                kind,
            });
            return Ok(min);
        }
        match self.next_decision(&kind)?.0 {
            Decision::Float(v) => Ok(v),
            _ => Err(self.mismatch("expected a float decision")),
        }
    }

    fn push_scope(&mut self) {
        if let Mode::Collect(scopes) = &mut self.mode {
            scopes.push(Vec::new());
        }
    }

    fn pop_scope(&mut self) -> DecisionSpec {
        match &mut self.mode {
            Mode::Collect(scopes) => DecisionSpec::new(scopes.pop().unwrap_or_default()),
            Mode::Apply(_) => DecisionSpec::default(),
        }
    }
}

/// Runs `program` once in collect mode and returns the registered spec.
pub fn collect_spec<R, P>(program: &P) -> Result<DecisionSpec, EagerError>
where
    P: Fn(&mut EagerContext) -> Result<R, EagerError>,
{
    let mut ctx = EagerContext::collect();
    program(&mut ctx)?;
    Ok(ctx.into_spec())
}

/// Searches an eager program whose return value is its reward.
pub fn run_eager<R, P>(
    program: P,
    config: &LoopConfig,
    options: &RunOptions,
) -> Result<(DecisionSpec, FlowReport<R>), FlowError>
where
    R: Reward,
    P: Fn(&mut EagerContext) -> Result<R, EagerError>,
{
    let spec = collect_spec(&program)?;
    let mut algorithm = config.algorithm.build::<R>()?;
    algorithm.setup(&spec)?;
    let mut report = FlowReport::new();
    for i in 0..config.trials {
        let dna = match algorithm.propose() {
            Ok(dna) => dna,
            Err(AlgorithmError::ExhaustedSpace) => break,
            Err(e) => return Err(e.into()),
        };
        let start = options.timing.then(Instant::now);
        let mut ctx = EagerContext::apply(&spec, &dna);
        let reward = program(&mut ctx)?;
        ctx.finish()?;
        let wall_ms = start.map_or(0, |s| s.elapsed().as_millis() as u64);
        algorithm.feedback(&dna, reward)?;
        report.record(i, None, &dna, reward, wall_ms);
    }
    Ok((spec, report))
}
