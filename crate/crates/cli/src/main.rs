fn main() {
    std::process::exit(sharpmin_cli::run(std::env::args_os()));
}
