fn main() {
    std::process::exit(ssw::run(std::env::args_os()));
}
