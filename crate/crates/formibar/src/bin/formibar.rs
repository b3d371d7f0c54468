fn main() -> std::process::ExitCode {
    formibar::cli::main()
}
