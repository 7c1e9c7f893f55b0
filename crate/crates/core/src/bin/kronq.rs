fn main() {
    std::process::exit(kronq::cli::main_entry());
}
