//! Shared instances for the benchmarks.

use gaudin_core::algebra::ModuleSpec;
use gaudin_core::harness::InstanceConfig;
use gaudin_core::scalar::Rat;

/// `(name, config)` pairs of increasing size, all with distinct real data.
pub const INSTANCES: &[(&str, &str)] = &[
    ("gl2_n2", r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1]], "b": ["0", "1"], "weight": [1, 1]}"#),
    (
        "gl3_n3",
        r#"{"N": 3, "K": ["0", "1", "3"], "partitions": [[1], [1], [1]], "b": ["0", "1", "2"], "weight": [1, 1, 1]}"#,
    ),
    (
        "gl2_n4",
        r#"{"N": 2, "K": ["0", "1/2"], "partitions": [[1], [1], [1], [1]], "b": ["0", "1", "2", "3"], "weight": [2, 2]}"#,
    ),
    (
        "gl2_mixed",
        r#"{"N": 2, "K": ["0", "1/2"], "partitions": [[2], [1, 1], [1], [1]], "b": ["0", "1", "2", "3"], "weight": [3, 3]}"#,
    ),
];

pub fn config(json: &str) -> InstanceConfig {
    InstanceConfig::from_json(json).expect("benchmark instances are valid")
}

pub fn spec(json: &str) -> ModuleSpec<Rat> {
    config(json).spec().expect("benchmark instances are valid")
}
