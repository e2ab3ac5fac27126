fn main() {
    std::process::exit(filippov::cli::main_entry());
}
