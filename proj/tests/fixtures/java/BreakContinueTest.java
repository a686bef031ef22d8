package org.example.scan;

import org.junit.Test;

public class BreakContinueTest {
    @Test
    public void findsFirstEven() {
        int[] data = {1, 3, 5, 6, 7, 8};
        int found = -1;
        for (int i = 0; i < data.length; i++) {
            if (data[i] % 2 != 0) {
                continue;
            }
            found = data[i];
            break;
        }
        assertEquals(6, found);
    }
}
