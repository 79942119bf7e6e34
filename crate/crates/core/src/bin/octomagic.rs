fn main() {
    std::process::exit(octomagic::cli::run(std::env::args_os()));
}
