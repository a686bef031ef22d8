package org.example.concurrent;

import org.junit.Test;

public class SynchronizedCounterTest {
    private final Object lock = new Object();
    private int counter;

    @Test
    public void incrementsUnderLock() throws InterruptedException {
        Thread t = new Thread(() -> {
            for (int i = 0; i < 100; i++) {
                synchronized (lock) {
                    counter++;
                }
            }
        });
        t.start();
        t.join();
        synchronized (lock) {
            assertEquals(100, counter);
        }
    }
}
