fn main() {
    std::process::exit(iwasawa::cli::run());
}
