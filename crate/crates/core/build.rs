use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

// Fixtures hold printed reference data; refuse to build if one changes
// without its checksum being updated.
fn main() {
    let dir = Path::new("fixtures");
    let listing = fs::read_to_string(dir.join("CHECKSUMS")).expect("fixtures/CHECKSUMS missing");
    println!("cargo:rerun-if-changed=fixtures");
    for line in listing.lines().filter(|l| !l.trim().is_empty()) {
        let (want, name) = line
            .split_once(char::is_whitespace)
            .expect("malformed CHECKSUMS line");
        let name = name.trim();
        let path = dir.join(name);
        println!("cargo:rerun-if-changed={}", path.display());
        let bytes = fs::read(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        let got = hex::encode(Sha256::digest(&bytes));
        if got != want {
            panic!("fixture {name} does not match its checksum ({got} != {want})");
        }
    }
}
