fn main() {
    std::process::exit(finmorita::cli::main(std::env::args_os()));
}
