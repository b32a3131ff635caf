fn main() -> std::process::ExitCode {
    evomr::cli::main()
}
