fn main() {
    std::process::exit(blowup::run());
}
