//! Regenerates the bundled sample data in `fixtures/`.
//!
//! ```text
//! cargo run -p hqlab-cli --example gen_fixtures
//! ```

use std::path::Path;

use hqlab::simlab::{generate_ar, generate_lr, GeneratorSpec};

pub fn fixtures() -> Vec<(&'static str, Vec<u8>)> {
    let lr = GeneratorSpec::lr_gaussian(vec![1.0, 0.5, 0.0], 1.0, 0).expect("valid generator");
    let mut demo = Vec::new();
    generate_lr(&lr, 200).and_then(|ds| ds.write_csv(&mut demo)).expect("demo dataset");

    let ar2 = GeneratorSpec::ar_path(vec![0.5, -0.3], 1.0, 0).expect("stationary");
    let mut ar = Vec::new();
    generate_ar(&ar2, 5000).and_then(|s| s.write_text(&mut ar)).expect("ar2 series");

    let noise = GeneratorSpec::ar_path(vec![], 1.0, 0).expect("white noise");
    let mut wn = Vec::new();
    generate_ar(&noise, 5000).and_then(|s| s.write_text(&mut wn)).expect("white noise series");

    vec![("demo_lr.csv", demo), ("ar2.txt", ar), ("white_noise.txt", wn)]
}

#[allow(dead_code)]
fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, bytes) in fixtures() {
        std::fs::write(dir.join(name), bytes)?;
        println!("wrote {name}");
    }
    Ok(())
}
