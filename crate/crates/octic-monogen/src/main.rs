fn main() {
    std::process::exit(octic_monogen::cli::run());
}
