fn main() {
    std::process::exit(hspline::cli::main());
}
