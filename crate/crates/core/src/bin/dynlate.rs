fn main() {
    std::process::exit(dynlate::cli::run(std::env::args_os()));
}
