fn main() -> std::process::ExitCode {
    svp_core::cli::main()
}
