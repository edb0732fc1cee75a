fn main() {
    std::process::exit(gapforge::run(std::env::args_os()));
}
