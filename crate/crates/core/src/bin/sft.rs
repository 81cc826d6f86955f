fn main() {
    std::process::exit(sft_core::cli::main_with_args(std::env::args_os()));
}
