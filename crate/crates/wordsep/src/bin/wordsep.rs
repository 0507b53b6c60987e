fn main() {
    std::process::exit(wordsep::cli::run());
}
