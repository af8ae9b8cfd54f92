//! Regenerates the shipped model files.
//!
//! cargo run --release -p mediator-core --example author_models -- [DIR]

use std::path::PathBuf;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models"));
    std::fs::create_dir_all(&dir).expect("create model directory");
    for (name, text) in mediator_core::models::default_files(true).expect("default models") {
        std::fs::write(dir.join(name), text).expect("write model file");
        println!("wrote {}", dir.join(name).display());
    }
}
