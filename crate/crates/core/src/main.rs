fn main() {
    std::process::exit(uimpl::cli::run(std::env::args_os()));
}
