package org.example.guard;

import org.junit.Test;

public class InfiniteLoopGuardTest {
    @Test
    public void exitsViaBreak() {
        int steps = 0;
        for (;;) {
            steps++;
            if (steps == 5) {
                break;
            }
        }
        while (true) {
            if (--steps == 0) {
                break;
            }
        }
        assertEquals(0, steps);
    }
}
