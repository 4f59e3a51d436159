fn main() {
    std::process::exit(thermocone::cli::run(std::env::args_os()));
}
