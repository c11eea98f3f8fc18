fn main() {
    std::process::exit(gumbel_exit::cli::run(std::env::args_os()));
}
