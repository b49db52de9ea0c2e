fn main() {
    std::process::exit(frob::cli::main_entry());
}
