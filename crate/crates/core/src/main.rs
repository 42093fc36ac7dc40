fn main() {
    std::process::exit(hurwitz::cli::dispatch(std::env::args_os()));
}
