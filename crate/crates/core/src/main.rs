fn main() -> std::process::ExitCode {
    ncomsim::cli::main_entry()
}
