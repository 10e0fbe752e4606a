pub mod abstraction;
pub mod algorithms;
pub mod bench;
pub mod flows;
pub mod hyper;
pub mod symbolic;

pub use abstraction::{
    abstract_search_space, enumerate_dnas, materialize, materialize_partial, random_dna,
    AbstractionError, Decision, DecisionPoint, DecisionSpec, Dna,
};
pub use algorithms::{
    AlgorithmConfig, AlgorithmError, AlgorithmKind, EvolutionConfig, Exhaustive, RandomSearch,
    RegularizedEvolution, Reward, SearchAlgorithm,
};
pub use bench::{build_nasbench_space, BenchError, SyntheticNasOracle, TableOracle};
pub use flows::{
    run_eager, run_factorized, run_hybrid, run_joint, run_separate, Aggregator, EagerContext,
    FlowError, FlowReport, LoopConfig, Partition, RewardOracle, RunOptions, Sampler, TrialRecord,
};
pub use hyper::{
    floatv, intv, manyof, oneof, permutate, space_size, HyperError, HyperKind, HyperValue,
    SpaceSize,
};
pub use symbolic::{
    deserialize, serialize, KeyPath, Mapping, Object, RebindDirective, Registry, SymbolicError,
    TypeDef, TypeHandle, Value, ValueSpec,
};

/// `f64` instantiations of the reward-generic types.
pub type Report = FlowReport<f64>;
pub type Record = TrialRecord<f64>;
pub type Evolution = RegularizedEvolution<f64>;
pub type BoxedAlgorithm = Box<dyn SearchAlgorithm<f64>>;
pub type SharedAlgorithm = flows::SharedAlgorithm<f64>;
pub type Trial = flows::Trial<f64>;
