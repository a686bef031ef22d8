package org.example.errors;

import org.junit.Test;

public class ThrowAndCatchTest {
    private void check(int value) {
        if (value < 0) {
            throw new IllegalArgumentException("negative: " + value);
        }
    }

    @Test
    public void rejectsNegative() {
        boolean thrown = false;
        try {
            check(-1);
        } catch (IllegalArgumentException e) {
            thrown = true;
        }
        assertTrue(thrown);
    }
}
