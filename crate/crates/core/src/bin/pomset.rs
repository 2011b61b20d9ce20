fn main() {
    std::process::exit(pomsets::cli::run(std::env::args_os()));
}
