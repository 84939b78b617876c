//! Writes the fixture corpus to `tests/fixtures`.

use std::fs;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    fs::create_dir_all(&dir)?;
    for (name, text) in muxsynth::corpus::files()? {
        fs::write(dir.join(&name), text)?;
        println!("{name}");
    }
    Ok(())
}
