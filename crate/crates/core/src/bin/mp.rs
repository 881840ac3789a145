fn main() {
    std::process::exit(mediated_persuasion::cli::run(std::env::args_os()));
}
