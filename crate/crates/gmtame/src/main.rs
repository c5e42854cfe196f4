fn main() -> std::process::ExitCode {
    gmtame::cli::run()
}
