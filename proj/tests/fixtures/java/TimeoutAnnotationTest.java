package org.example.timing;

import org.junit.Test;

public class TimeoutAnnotationTest {
    @Test(timeout = 2000)
    @SuppressWarnings("unchecked")
    public void finishesQuickly() {
        long start = System.nanoTime();
        int acc = 0;
        for (int i = 0; i < 1000; i++) {
            acc ^= i * 31;
        }
        long elapsed = System.nanoTime() - start;
        assertTrue(elapsed >= 0 && acc != -1);
    }
}
