fn main() {
    std::process::exit(harmonic_svf::cli::run(std::env::args_os()));
}
