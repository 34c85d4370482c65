fn main() -> std::process::ExitCode {
    simhyp::cli::main_entry()
}
