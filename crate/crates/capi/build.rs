use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("supertwirl.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(err) => {
            // Keep a previously generated header usable instead of failing
            // the whole build over a bindgen hiccup.
            println!("cargo:warning=cbindgen failed: {err}");
            if !header.exists() {
                panic!("no C header available and cbindgen failed: {err}");
            }
        }
    }
}
