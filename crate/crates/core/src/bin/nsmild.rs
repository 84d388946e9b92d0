fn main() {
    std::process::exit(ns_mild::cli::main());
}
