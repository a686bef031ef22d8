class ForLoop {
  void run() {
    for (int i=0;i<3;i++) { x(); }
  }
}
