package org.example.math;

import org.junit.Test;

public class UnaryOpsTest {
    @Test
    public void appliesUnaryOperators() {
        int a = 5;
        int b = -a;
        int c = ~a;
        boolean flag = !(a > b);
        a++;
        --b;
        assertEquals(6, a);
        assertEquals(-6, b);
        assertEquals(-6, c);
        assertFalse(flag);
    }
}
