fn main() {
    std::process::exit(metric_curv::cli::run(std::env::args_os()));
}
