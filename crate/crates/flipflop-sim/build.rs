fn main() {
    // dense Hermitian eigensolves and matrix products go through the system
    // OpenBLAS (zheevd/zgemm); see src/linalg.rs
    println!("cargo:rustc-link-lib=dylib=openblas");
}
