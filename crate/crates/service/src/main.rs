fn main() -> std::process::ExitCode {
    argus::cli::main()
}
