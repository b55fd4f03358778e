//! Writes an artifact with its manifest sidecar and checks it back.

use parity_anneal::manifest::{
    read_verified, sidecar_path, write_artifact, write_atomic, RunManifest,
};
use serde_json::json;

fn main() -> parity_anneal::Result<()> {
    let dir = std::env::temp_dir().join(format!("parity-anneal-manifest-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("gaps.csv");

    let m = RunManifest::new("example", &json!({"grid": 201}))?.with_seed(3);
    write_artifact(
        &path,
        &format!("# manifest={}\ninstance,min_gap\n(3,1,1),0.42\n", m.hash()),
        &m,
    )?;
    println!(
        "wrote {} and {}",
        path.display(),
        sidecar_path(&path).display()
    );
    let (_, back) = read_verified(&path)?;
    println!("verified, seed {:?}", back.seed);

    write_atomic(&path, b"# manifest=0\ninstance,min_gap\n")?;
    println!("after tampering: {}", read_verified(&path).unwrap_err());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
