#![allow(dead_code)]

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symsearch::symbolic::TypeHandle;
use symsearch::{
    floatv, intv, manyof, oneof, permutate, space_size, Registry, TypeDef, Value, ValueSpec,
};

thread_local! {
    pub static HOOK_CALLS: Cell<usize> = const { Cell::new(0) };
}

pub fn hook_calls() -> usize {
    HOOK_CALLS.with(Cell::get)
}

/// Registry with a `Cell(a: any, b: int in [0, 100])` type whose recompute
/// hook bumps [`HOOK_CALLS`].
pub fn registry() -> (Registry, TypeHandle) {
    let mut registry = Registry::new();
    let cell = registry
        .register(
            TypeDef::new("Cell")
                .param("a", ValueSpec::any())
                .param("b", ValueSpec::int_range(0, 100))
                .on_recompute(|_| HOOK_CALLS.with(|c| c.set(c.get() + 1))),
        )
        .unwrap();
    (registry, cell)
}

/// Random trees and spaces. Every leaf carries a fresh label, so choice
/// candidates are pairwise distinct and distinct DNAs give distinct programs.
pub struct SpaceGen {
    rng: ChaCha8Rng,
    label: i64,
    cell: TypeHandle,
    pub hypers: bool,
    pub floats: bool,
}

const HINTS: [Option<&str>; 3] = [Some("a"), Some("b"), None];

impl SpaceGen {
    pub fn new(seed: u64, cell: TypeHandle) -> Self {
        SpaceGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            label: 0,
            cell,
            hypers: true,
            floats: false,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn label(&mut self) -> i64 {
        self.label += 1;
        self.label
    }

    fn hints(&mut self) -> Option<String> {
        HINTS[self.rng.gen_range(0..HINTS.len())].map(str::to_string)
    }

    fn leaf(&mut self) -> Value {
        let label = self.label();
        match self.rng.gen_range(0..4) {
            0 => Value::Int(label),
            1 => Value::Text(format!("t{label}")),
            2 => Value::Float(label as f64 + 0.5),
            _ => Value::List(vec![Value::Bool(self.rng.gen()), Value::Int(label)]),
        }
    }

    pub fn tree(&mut self, depth: u32) -> Value {
        let kinds = if depth == 0 {
            2
        } else if self.hypers {
            7
        } else {
            5
        };
        match self.rng.gen_range(0..kinds) {
            0 => self.leaf(),
            1 if self.hypers => self.range(),
            1 => self.leaf(),
            2 => {
                let n = self.rng.gen_range(1..=3);
                Value::List((0..n).map(|_| self.tree(depth - 1)).collect())
            }
            3 => {
                let n = self.rng.gen_range(1..=3);
                let entries = (0..n)
                    .map(|i| (format!("k{i}"), self.tree(depth - 1)))
                    .collect::<Vec<_>>();
                Value::mapping(entries).unwrap()
            }
            4 => {
                let a = self.tree(depth - 1);
                let b = if self.hypers && self.rng.gen_bool(0.5) {
                    Value::from(
                        intv(0, self.rng.gen_range(0..3))
                            .unwrap()
                            .with_hints_opt(self.hints()),
                    )
                } else {
                    Value::Int(self.rng.gen_range(0..=100))
                };
                self.cell.create([("a", a), ("b", b)]).unwrap()
            }
            _ => self.choice(depth - 1),
        }
    }

    fn range(&mut self) -> Value {
        let hints = self.hints();
        if self.floats && self.rng.gen_bool(0.3) {
            return floatv(-1.0, 1.0).unwrap().with_hints_opt(hints).into();
        }
        let min = self.rng.gen_range(-3..3);
        intv(min, min + self.rng.gen_range(0..3))
            .unwrap()
            .with_hints_opt(hints)
            .into()
    }

    fn choice(&mut self, depth: u32) -> Value {
        let n = self.rng.gen_range(1..=3);
        let candidates = (0..n)
            .map(|_| {
                let label = self.label();
                let body = self.tree(depth);
                Value::List(vec![Value::Int(label), body])
            })
            .collect::<Vec<_>>();
        let hyper = match self.rng.gen_range(0..4) {
            0 | 1 => oneof(candidates),
            2 => permutate(candidates),
            _ => {
                let distinct = self.rng.gen_bool(0.5);
                let k = if distinct {
                    self.rng.gen_range(1..=n)
                } else {
                    self.rng.gen_range(1..=3)
                };
                manyof(k, candidates, distinct, self.rng.gen_bool(0.5))
            }
        };
        hyper.unwrap().with_hints_opt(self.hints()).into()
    }

    /// A space of depth `depth` with at least one decision point and, when
    /// finite, at most `max_size` programs.
    pub fn space(&mut self, depth: u32, max_size: u64) -> Value {
        loop {
            let space = self.tree(depth);
            if space.is_deterministic() {
                continue;
            }
            let size = space_size(&space);
            if !size.is_finite() || size.to_u64().is_some_and(|n| n <= max_size) {
                return space;
            }
        }
    }
}
