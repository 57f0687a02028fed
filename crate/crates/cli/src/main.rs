fn main() {
    std::process::exit(dynperc_cli::run(std::env::args_os()));
}
