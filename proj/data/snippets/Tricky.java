public class Tricky {
    // if (x) { while (y) }
    String label = "if && || ? {";

    int pick(int a, int b) {
        /* for (;;) { case */
        return a > b ? a : b;
    }

    void loop(java.util.List<? extends Number> xs) {
        try {
            for (Number n : xs) {
                System.out.println(n);
            }
        } catch (RuntimeException e) {
            Runnable r = new Runnable() {
                public void run() { }
            };
        }
    }
}
