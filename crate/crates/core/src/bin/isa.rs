fn main() {
    std::process::exit(isa_core::cli::main_with_std());
}
