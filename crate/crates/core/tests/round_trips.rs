use gaudin_core::algebra::{build_embedded_module, ModuleSpec};
use gaudin_core::bae::{bae_residual, root_coordinates_from_space, RootCoordinates};
use gaudin_core::bethe::build_bethe_operator;
use gaudin_core::harness::InstanceConfig;
use gaudin_core::scalar::{Rat, Scalar};
use gaudin_core::spectral::{character_to_operator, joint_diagonalize, kernel_from_operator, SpectralOptions};
use num_complex::Complex64;

fn spec(text: &str) -> ModuleSpec<Rat> {
    InstanceConfig::from_json(text).unwrap().spec().unwrap()
}

/// Spectral characters -> kernels -> root coordinates -> Bethe equations.
fn kernels_solve_the_equations(text: &str) {
    let s = spec(text);
    let k: Vec<Complex64> = s.k().iter().map(Scalar::to_c64).collect();
    let op = build_bethe_operator(&build_embedded_module(&s).unwrap()).unwrap();
    let spectrum = joint_diagonalize(&op, s.b(), &SpectralOptions::default()).unwrap();
    assert!(!spectrum.characters.is_empty());
    for ch in &spectrum.characters {
        let x = kernel_from_operator(&character_to_operator(ch), &s, 1e-8).unwrap();
        let t: RootCoordinates = root_coordinates_from_space(&x).unwrap();
        let r = bae_residual(&t, &k).unwrap();
        assert!(r.iter().all(|z| z.norm() < 1e-7), "{r:?}");
    }
}

#[test]
fn golden_kernels_have_bethe_root_coordinates() {
    kernels_solve_the_equations(r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1]], "b": ["0", "1"], "weight": [1, 1]}"#);
}

#[test]
fn gl3_kernels_have_bethe_root_coordinates() {
    kernels_solve_the_equations(
        r#"{"N": 3, "K": ["0", "1", "3"], "partitions": [[1], [1], [1]], "b": ["0", "1", "2"], "weight": [1, 1, 1]}"#,
    );
}
