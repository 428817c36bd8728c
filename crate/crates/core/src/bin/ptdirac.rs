fn main() {
    std::process::exit(ptdirac::cli::main());
}
